use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scattering::{FeaturePath, S1Path};
use crate::Scalar;

/// Feature set used for classification, from coarsest to finest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AblationLevel {
    /// S1 summed over `beta1`.
    A1,
    /// S1.
    A1b1,
    /// S2 summed over `beta2` and `gamma2`.
    A1b1a2,
    /// S2 summed over `gamma2`.
    A1b1a2b2,
    /// Every S2 path.
    #[default]
    Full,
}

impl AblationLevel {
    pub const ALL: [AblationLevel; 5] = [
        AblationLevel::A1,
        AblationLevel::A1b1,
        AblationLevel::A1b1a2,
        AblationLevel::A1b1a2b2,
        AblationLevel::Full,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AblationLevel::A1 => "a1",
            AblationLevel::A1b1 => "a1b1",
            AblationLevel::A1b1a2 => "a1b1a2",
            AblationLevel::A1b1a2b2 => "a1b1a2b2",
            AblationLevel::Full => "full",
        }
    }

    /// Whether the level reads second-order coefficients.
    pub fn needs_s2(self) -> bool {
        !matches!(self, AblationLevel::A1 | AblationLevel::A1b1)
    }
}

impl fmt::Display for AblationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AblationLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AblationLevel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown ablation level {s:?} (expected a1, a1b1, a1b1a2, a1b1a2b2 or full)")))
    }
}

fn sign(v: i8) -> String {
    if v > 0 {
        format!("+{v}")
    } else {
        v.to_string()
    }
}

fn group<K: Ord, T: Scalar>(items: impl Iterator<Item = (K, T)>) -> BTreeMap<K, T> {
    let mut out = BTreeMap::new();
    for (k, v) in items {
        let e = out.entry(k).or_insert_with(T::zero);
        *e = *e + v;
    }
    out
}

/// Feature names and values of one piece at `level`, by marginal summation over
/// the excluded trailing indices. Groups are emitted in canonical path order and
/// each is summed in input order.
pub fn ablate<T: Scalar>(
    level: AblationLevel,
    s1: &[(S1Path, T)],
    s2: &[(FeaturePath, T)],
) -> (Vec<String>, Vec<T>) {
    let unzip = |m: Vec<(String, T)>| m.into_iter().unzip();
    match level {
        AblationLevel::A1 => unzip(
            group(s1.iter().map(|(p, v)| (p.j1, *v)))
                .into_iter()
                .map(|(j1, v)| (format!("j1={j1}"), v))
                .collect(),
        ),
        AblationLevel::A1b1 => unzip(
            group(s1.iter().map(|(p, v)| (*p, *v)))
                .into_iter()
                .map(|(p, v)| (p.to_string(), v))
                .collect(),
        ),
        AblationLevel::A1b1a2 => unzip(
            group(s2.iter().map(|(p, v)| ((p.j1, p.beta1, p.j2), *v)))
                .into_iter()
                .map(|((j1, b1, j2), v)| (format!("j1={j1}/b1={}/j2={j2}", sign(b1)), v))
                .collect(),
        ),
        AblationLevel::A1b1a2b2 => unzip(
            group(s2.iter().map(|(p, v)| ((p.j1, p.beta1, p.j2, p.beta2), *v)))
                .into_iter()
                .map(|((j1, b1, j2, b2), v)| (format!("j1={j1}/b1={}/j2={j2}/b2={b2}", sign(b1)), v))
                .collect(),
        ),
        AblationLevel::Full => unzip(
            group(s2.iter().map(|(p, v)| (*p, *v)))
                .into_iter()
                .map(|(p, v)| (p.to_string(), v))
                .collect(),
        ),
    }
}
