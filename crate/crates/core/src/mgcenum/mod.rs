//! Enumeration of Mikhalkin graded circuits.

mod elementary;
mod enumerate;
mod triangulation;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use elementary::{elementary_circuit, ElementaryType};
pub use enumerate::{enumerate_mgc, enumerate_mgc_at, glue, type_IV_chains, type_iv_chains, ChainSet, EnumeratedCircuit};
pub use triangulation::{admissible_cells, face_points, mikhalkin_triangulation, placing_triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MgcError {
    #[error("the face contains the excluded point")]
    ContainsExcludedPoint,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("point outside the simplex")]
    OutOfSimplex,
    #[error("gluing hypotheses violated: {0}")]
    HypothesesViolated(String),
    #[error("cannot parse descriptor `{0}`")]
    BadDescriptor(String),
}

/// One block of a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    I,
    II,
    III(usize),
    IV(usize),
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::I => write!(f, "I"),
            Block::II => write!(f, "II"),
            Block::III(k) => write!(f, "III^({k})"),
            Block::IV(k) => write!(f, "IV_{k}"),
        }
    }
}

impl FromStr for Block {
    type Err = MgcError;

    fn from_str(s: &str) -> Result<Self, MgcError> {
        let bad = || MgcError::BadDescriptor(s.to_string());
        let num = |rest: &str| -> Result<usize, MgcError> {
            let t: String = rest.chars().map(superscript_digit).filter(|c| !matches!(c, '^' | '_' | '(' | ')')).collect();
            t.parse::<usize>().ok().filter(|&k| k >= 2).ok_or_else(bad)
        };
        let s2: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s2 == "I" {
            Ok(Block::I)
        } else if s2 == "II" {
            Ok(Block::II)
        } else if let Some(rest) = s2.strip_prefix("III") {
            Ok(Block::III(num(rest)?))
        } else if let Some(rest) = s2.strip_prefix("IV") {
            Ok(Block::IV(num(rest)?))
        } else {
            Err(bad())
        }
    }
}

fn superscript_digit(c: char) -> char {
    const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    match c {
        '⁽' => '(',
        '⁾' => ')',
        _ => SUP
            .iter()
            .chain(SUB.iter())
            .position(|&x| x == c)
            .map_or(c, |i| char::from(b'0' + (i % 10) as u8)),
    }
}

/// Sequence of blocks, lowest level first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MgcDescriptor(pub Vec<Block>);

impl MgcDescriptor {
    pub fn blocks(&self) -> &[Block] {
        &self.0
    }

    /// Dimension spanned: I adds 1, II adds 2, III^(k) adds k, and IV_k adds 2 (its followers add the rest).
    pub fn dim(&self) -> usize {
        self.0
            .iter()
            .map(|b| match b {
                Block::I => 1,
                Block::II | Block::IV(_) => 2,
                Block::III(k) => *k,
            })
            .sum()
    }

    /// Unicode rendering, e.g. `IV₂ ‖ III⁽²⁾ ‖ I`.
    pub fn pretty(&self) -> String {
        const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
        const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
        let digits = |k: usize, tab: &[char; 10]| k.to_string().bytes().map(|b| tab[(b - b'0') as usize]).collect::<String>();
        self.0
            .iter()
            .map(|b| match b {
                Block::I => "I".to_string(),
                Block::II => "II".to_string(),
                Block::III(k) => format!("III⁽{}⁾", digits(*k, &SUP)),
                Block::IV(k) => format!("IV{}", digits(*k, &SUB)),
            })
            .collect::<Vec<_>>()
            .join(" ‖ ")
    }
}

impl fmt::Display for MgcDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join("||"))
    }
}

impl FromStr for MgcDescriptor {
    type Err = MgcError;

    fn from_str(s: &str) -> Result<Self, MgcError> {
        let norm = s.replace('‖', "||");
        if norm.trim().is_empty() {
            return Err(MgcError::BadDescriptor(s.to_string()));
        }
        norm.split("||").map(|p| p.parse::<Block>()).collect::<Result<Vec<_>, _>>().map(MgcDescriptor)
    }
}

impl Serialize for MgcDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MgcDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Installs a global rayon pool sized by `TROPSING_THREADS`, once.
pub fn configure_threads() {
    if let Some(n) = std::env::var("TROPSING_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}
