use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

fn fmt_sign(v: i8) -> String {
    if v > 0 {
        format!("+{v}")
    } else {
        v.to_string()
    }
}

fn parse_signed(s: &str) -> Option<i8> {
    match s {
        "-1" => Some(-1),
        "0" => Some(0),
        "+1" | "1" => Some(1),
        _ => None,
    }
}

fn parse_fields<'a>(s: &'a str, keys: &[&str]) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = s.split('/').collect();
    if parts.len() != keys.len() {
        return Err(Error::Format(format!("malformed feature path {s:?}")));
    }
    parts
        .iter()
        .zip(keys)
        .map(|(part, key)| {
            part.strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| Error::Format(format!("malformed feature path {s:?}")))
        })
        .collect()
}

/// First-order coefficient index `(j1, beta1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct S1Path {
    pub j1: usize,
    pub beta1: i8,
}

impl fmt::Display for S1Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j1={}/b1={}", self.j1, fmt_sign(self.beta1))
    }
}

impl FromStr for S1Path {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = parse_fields(s, &["j1", "b1"])?;
        let bad = || Error::Format(format!("malformed feature path {s:?}"));
        Ok(S1Path {
            j1: v[0].parse().map_err(|_| bad())?,
            beta1: parse_signed(v[1]).ok_or_else(bad)?,
        })
    }
}

/// Second-order coefficient index `(j1, beta1, j2, beta2, gamma2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeaturePath {
    pub j1: usize,
    pub beta1: i8,
    pub j2: usize,
    pub beta2: usize,
    pub gamma2: i8,
}

impl fmt::Display for FeaturePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "j1={}/b1={}/j2={}/b2={}/g2={}",
            self.j1,
            fmt_sign(self.beta1),
            self.j2,
            self.beta2,
            fmt_sign(self.gamma2)
        )
    }
}

impl FromStr for FeaturePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = parse_fields(s, &["j1", "b1", "j2", "b2", "g2"])?;
        let bad = || Error::Format(format!("malformed feature path {s:?}"));
        Ok(FeaturePath {
            j1: v[0].parse().map_err(|_| bad())?,
            beta1: parse_signed(v[1]).ok_or_else(bad)?,
            j2: v[2].parse().map_err(|_| bad())?,
            beta2: v[3].parse().map_err(|_| bad())?,
            gamma2: parse_signed(v[4]).ok_or_else(bad)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats() {
        let p = FeaturePath { j1: 2, beta1: -1, j2: 5, beta2: 13, gamma2: 1 };
        assert_eq!(p.to_string(), "j1=2/b1=-1/j2=5/b2=13/g2=+1");
        assert_eq!(S1Path { j1: 0, beta1: 0 }.to_string(), "j1=0/b1=0");
        assert!("j1=0/b1=2".parse::<S1Path>().is_err());
        assert!("j1=0/x=0".parse::<S1Path>().is_err());
    }

    proptest! {
        #[test]
        fn path_strings_round_trip(j1 in 0usize..30, b1 in -1i8..=1, j2 in 0usize..30, b2 in 0usize..24, g2 in -1i8..=1) {
            let p = FeaturePath { j1, beta1: b1, j2, beta2: b2, gamma2: g2 };
            prop_assert_eq!(p.to_string().parse::<FeaturePath>().unwrap(), p);
            let s = S1Path { j1, beta1: b1 };
            prop_assert_eq!(s.to_string().parse::<S1Path>().unwrap(), s);
        }
    }
}
