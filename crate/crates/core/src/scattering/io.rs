use std::fmt::Display;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const PATH_CSV_HEADER: &str = "path,value";

/// Formats `path,value` rows. Values use the shortest text that parses back to
/// the same `f64`.
pub fn write_path_csv<P: Display>(paths: &[P], values: &[f64]) -> String {
    let mut out = String::with_capacity(32 * paths.len() + 16);
    out.push_str(PATH_CSV_HEADER);
    out.push('\n');
    for (p, v) in paths.iter().zip(values) {
        out.push_str(&format!("{p},{v:?}\n"));
    }
    out
}

/// Parses the output of [`write_path_csv`].
pub fn read_path_csv<P>(text: &str) -> Result<(Vec<P>, Vec<f64>)>
where
    P: FromStr<Err = Error>,
{
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == PATH_CSV_HEADER => {}
        _ => {
            return Err(Error::Csv {
                line: 1,
                message: format!("expected header {PATH_CSV_HEADER:?}"),
            })
        }
    }
    let mut paths = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Csv { line: i + 1, message };
        let (p, v) = line
            .split_once(',')
            .ok_or_else(|| err("expected `path,value`".into()))?;
        paths.push(p.parse::<P>().map_err(|e| err(e.to_string()))?);
        let v: f64 = v.parse().map_err(|_| err(format!("bad value {v:?}")))?;
        values.push(v);
    }
    Ok((paths, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::{FeaturePath, S1Path};

    #[test]
    fn round_trip_is_exact() {
        let paths = vec![S1Path { j1: 0, beta1: -1 }, S1Path { j1: 3, beta1: 1 }];
        let values = vec![0.1 + 0.2, 1e-300];
        let text = write_path_csv(&paths, &values);
        assert!(text.starts_with("path,value\nj1=0/b1=-1,0.30000000000000004\n"));
        let (p, v) = read_path_csv::<S1Path>(&text).unwrap();
        assert_eq!(p, paths);
        assert_eq!(v, values);
    }

    #[test]
    fn errors_carry_line() {
        let text = "path,value\nj1=0/b1=0/j2=1/b2=0/g2=0,1\nj1=0/b1=0,2\n";
        match read_path_csv::<FeaturePath>(text) {
            Err(Error::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(read_path_csv::<S1Path>("value\n").is_err());
    }
}
