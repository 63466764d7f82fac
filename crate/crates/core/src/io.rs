//! Sinogram files: a CSV of samples plus a JSON sidecar with the grid metadata.
//!
//! The CSV starts with `# transform=radon dimension=2 body=<json> function=<json>`
//! and a column line, followed by direction-major rows `omega_1,...,omega_n,p,value`
//! with 17 significant digits, so values survive a round trip bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Direction, Slab, Vector};
use crate::transforms::{Sinogram, SinogramMeta, TransformKind};

/// Formats with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_or_null(v: &Option<serde_json::Value>) -> String {
    v.as_ref().map_or_else(|| "null".to_string(), |v| v.to_string())
}

pub fn write_csv<W: Write>(sino: &Sinogram, mut w: W) -> Result<()> {
    writeln!(
        w,
        "# transform={} dimension={} body={} function={}",
        sino.transform.as_str(),
        sino.dimension,
        json_or_null(&sino.meta.body),
        json_or_null(&sino.meta.function)
    )?;
    let cols: Vec<String> = (1..=sino.dimension).map(|i| format!("omega_{i}")).collect();
    writeln!(w, "{},p,value", cols.join(","))?;
    for (i, p, v) in sino.samples() {
        for c in sino.directions[i].as_slice() {
            write!(w, "{},", fmt_f64(*c))?;
        }
        writeln!(w, "{},{}", fmt_f64(p), fmt_f64(v))?;
    }
    w.flush()?;
    Ok(())
}

fn parse_header(line: &str) -> Result<(TransformKind, usize, Option<serde_json::Value>, Option<serde_json::Value>)> {
    let bad = || Error::Parse(format!("malformed sinogram header: {line}"));
    let rest = line.strip_prefix('#').ok_or_else(bad)?.trim();
    let rest = rest.strip_prefix("transform=").ok_or_else(bad)?;
    let (transform, rest) = rest.split_once(' ').ok_or_else(bad)?;
    let rest = rest.trim_start().strip_prefix("dimension=").ok_or_else(bad)?;
    let (dim, rest) = rest.split_once(' ').unwrap_or((rest, ""));
    let dimension: usize = dim.parse().map_err(|_| bad())?;
    let (body, function) = match rest.trim() {
        "" => (None, None),
        r => {
            let r = r.strip_prefix("body=").ok_or_else(bad)?;
            let (b, f) = r.rsplit_once(" function=").ok_or_else(bad)?;
            let parse = |s: &str| -> Result<Option<serde_json::Value>> {
                match serde_json::from_str::<serde_json::Value>(s)? {
                    serde_json::Value::Null => Ok(None),
                    v => Ok(Some(v)),
                }
            };
            (parse(b)?, parse(f)?)
        }
    };
    Ok((transform.parse()?, dimension, body, function))
}

/// Reads a CSV written by [`write_csv`]; consecutive rows with identical
/// direction components form one direction.
pub fn read_csv<R: BufRead>(r: R) -> Result<Sinogram> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty sinogram file".into()))??;
    let (transform, dimension, body, function) = parse_header(&header)?;
    if dimension != 2 && dimension != 3 {
        return Err(Error::UnsupportedDimension(dimension));
    }
    let mut sino = Sinogram {
        dimension,
        transform,
        directions: Vec::new(),
        offsets: Vec::new(),
        values: Vec::new(),
        meta: SinogramMeta { body, function, offset_rule: "unknown".into(), ..Default::default() },
    };
    let mut current: Option<Vec<f64>> = None;
    for (n, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("omega") {
            continue;
        }
        let fields = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("line {}: {e}", n + 2)))?;
        if fields.len() != dimension + 2 {
            return Err(Error::Parse(format!(
                "line {}: expected {} fields, found {}",
                n + 2,
                dimension + 2,
                fields.len()
            )));
        }
        let omega = &fields[..dimension];
        if current.as_deref() != Some(omega) {
            sino.directions.push(Direction::new(Vector::new(omega)?)?);
            sino.offsets.push(Vec::new());
            sino.values.push(Vec::new());
            current = Some(omega.to_vec());
        }
        sino.offsets.last_mut().expect("pushed").push(fields[dimension]);
        sino.values.last_mut().expect("pushed").push(fields[dimension + 1]);
    }
    sino.validate()?;
    Ok(sino)
}

/// Grid metadata stored next to the CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub transform: TransformKind,
    pub dimension: usize,
    pub directions: usize,
    pub offsets_per_direction: Vec<usize>,
    pub nodes: usize,
    pub angular_nodes: usize,
    pub offset_rule: String,
    pub slabs: Option<Vec<Slab>>,
    pub body: Option<serde_json::Value>,
    pub function: Option<serde_json::Value>,
}

impl Sidecar {
    pub fn of(sino: &Sinogram) -> Self {
        Self {
            transform: sino.transform,
            dimension: sino.dimension,
            directions: sino.directions.len(),
            offsets_per_direction: sino.offsets.iter().map(Vec::len).collect(),
            nodes: sino.meta.nodes,
            angular_nodes: sino.meta.angular_nodes,
            offset_rule: sino.meta.offset_rule.clone(),
            slabs: sino.meta.slabs.clone(),
            body: sino.meta.body.clone(),
            function: sino.meta.function.clone(),
        }
    }

    /// Copies the metadata into `sino` after checking that the grids agree.
    pub fn apply(self, sino: &mut Sinogram) -> Result<()> {
        let counts: Vec<usize> = sino.offsets.iter().map(Vec::len).collect();
        if self.dimension != sino.dimension
            || self.directions != sino.directions.len()
            || self.offsets_per_direction != counts
        {
            return Err(Error::InvalidGrid("sidecar does not describe this sinogram".into()));
        }
        sino.meta = SinogramMeta {
            body: self.body,
            function: self.function,
            nodes: self.nodes,
            angular_nodes: self.angular_nodes,
            offset_rule: self.offset_rule,
            slabs: self.slabs,
        };
        sino.validate()
    }
}

/// `x.csv` → `x.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes the CSV and its sidecar.
pub fn save(sino: &Sinogram, csv: &Path) -> Result<()> {
    write_csv(sino, BufWriter::new(File::create(csv)?))?;
    let mut text = serde_json::to_string_pretty(&Sidecar::of(sino))?;
    text.push('\n');
    std::fs::write(sidecar_path(csv), text)?;
    Ok(())
}

/// Reads a CSV and, when present, its sidecar.
pub fn load(csv: &Path) -> Result<Sinogram> {
    let mut sino = read_csv(BufReader::new(File::open(csv)?))?;
    let side = sidecar_path(csv);
    if side.exists() {
        let meta: Sidecar = serde_json::from_str(&std::fs::read_to_string(side)?)?;
        meta.apply(&mut sino)?;
    }
    Ok(sino)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{direction_grid, sinogram, SinogramOptions, TestFunction};

    fn sample() -> Sinogram {
        let f = TestFunction::gamma_family(Vector::xyz(0.1, 0.0, -0.2), 0.9, 0.5).unwrap();
        let dirs = direction_grid(3, 7, Some(1)).unwrap();
        let mut s = sinogram(&f, &dirs, &SinogramOptions { offsets: 16, ..Default::default() }).unwrap();
        s.meta.body = Some(serde_json::json!({"dimension": 3, "kind": "ball", "radius": 0.9}));
        s
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let s = sample();
        let mut buf = Vec::new();
        write_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# transform=radon dimension=3 body={"));
        assert!(text.lines().nth(1).unwrap() == "omega_1,omega_2,omega_3,p,value");
        let back = read_csv(&buf[..]).unwrap();
        assert_eq!(back.directions, s.directions);
        assert_eq!(back.offsets, s.offsets);
        assert_eq!(back.values, s.values);
        assert_eq!(back.meta.body, s.meta.body);
        assert_eq!(back.meta.function, None);
    }

    #[test]
    fn files_round_trip_with_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let s = sample();
        save(&s, &path).unwrap();
        assert_eq!(load(&path).unwrap(), s);
        std::fs::remove_file(sidecar_path(&path)).unwrap();
        let bare = load(&path).unwrap();
        assert!(bare.meta.slabs.is_none());
    }

    #[test]
    fn malformed_files_are_rejected() {
        for text in [
            "",
            "transform=radon dimension=2\n",
            "# transform=radon dimension=5\n",
            "# transform=radon dimension=2\n1,0,0.5\n",
            "# transform=radon dimension=2\n1,0,0.5,x\n",
            "# transform=radon dimension=2\n0.6,0.6,0.5,1\n",
            "# transform=radon dimension=2\n1,0,0.5,NaN\n",
        ] {
            assert!(read_csv(text.as_bytes()).is_err(), "{text:?}");
        }
        let ok = read_csv("# transform=xray dimension=2\n1,0,0.5,2\n1,0,0.6,3\n0,1,0.5,1\n".as_bytes()).unwrap();
        assert_eq!(ok.directions.len(), 2);
        assert_eq!(ok.transform, TransformKind::Xray);
    }
}
