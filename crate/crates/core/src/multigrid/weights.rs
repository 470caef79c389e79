//! Operator weights file and NAS class presets.
//!
//! The file format is line based. Blank lines and lines starting with `#`
//! are ignored; every other line is an operator name (`A`, `P`, `Q` or `S`)
//! followed by exactly four finite decimal numbers: the center, face, edge
//! and corner weights. Each name must appear exactly once.

use std::path::Path;
use std::str::FromStr;

use super::{MgOperators, Weights4, WEIGHTS_A, WEIGHTS_Q};
use crate::error::{Error, Result};

const NAS_SWA: &str = include_str!("../../data/nas_mg_sa.weights");
const NAS_BC: &str = include_str!("../../data/nas_mg_bc.weights");

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightsFile {
    pub a: Weights4,
    pub p: Weights4,
    pub q: Weights4,
    pub s: Weights4,
}

impl WeightsFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        parse_weights(&text)
    }

    /// Operators built from the file. `A` and `Q` must equal the fixed
    /// discretization and prolongation weights.
    pub fn operators(&self) -> Result<MgOperators> {
        for (name, got, want) in [("A", self.a, WEIGHTS_A), ("Q", self.q, WEIGHTS_Q)] {
            if got != want {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("{name} weights {:?} differ from {:?}", got.ws, want.ws),
                });
            }
        }
        Ok(MgOperators::new(self.p, self.s))
    }
}

pub fn parse_weights(text: &str) -> Result<WeightsFile> {
    let mut slots: [Option<Weights4>; 4] = [None; 4];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse {
            line: lineno + 1,
            msg,
        };
        let mut fields = line.split_whitespace();
        let name = fields.next().unwrap_or_default();
        let slot = match name {
            "A" => 0,
            "P" => 1,
            "Q" => 2,
            "S" => 3,
            other => return Err(err(format!("unknown operator {other:?}"))),
        };
        let mut ws = [0.0; 4];
        for (i, w) in ws.iter_mut().enumerate() {
            let tok = fields
                .next()
                .ok_or_else(|| err(format!("{name}: expected 4 weights, found {i}")))?;
            *w = parse_decimal(tok).ok_or_else(|| err(format!("{name}: bad number {tok:?}")))?;
        }
        if let Some(extra) = fields.next() {
            return Err(err(format!("{name}: unexpected trailing field {extra:?}")));
        }
        if slots[slot].replace(Weights4::new(ws)).is_some() {
            return Err(err(format!("{name} given twice")));
        }
    }
    let missing = |name: &str| Error::Parse {
        line: text.lines().count(),
        msg: format!("operator {name} missing"),
    };
    Ok(WeightsFile {
        a: slots[0].ok_or_else(|| missing("A"))?,
        p: slots[1].ok_or_else(|| missing("P"))?,
        q: slots[2].ok_or_else(|| missing("Q"))?,
        s: slots[3].ok_or_else(|| missing("S"))?,
    })
}

// Plain decimal or scientific notation only: no "inf", "nan" or hex.
fn parse_decimal(tok: &str) -> Option<f64> {
    let ok = tok
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'));
    if !ok {
        return None;
    }
    tok.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// NAS MG problem classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NasClass {
    S,
    W,
    A,
    B,
    C,
}

impl NasClass {
    pub fn side(self) -> usize {
        match self {
            NasClass::S => 32,
            NasClass::W => 128,
            NasClass::A | NasClass::B => 256,
            NasClass::C => 512,
        }
    }

    pub fn iterations(self) -> usize {
        match self {
            NasClass::S | NasClass::W | NasClass::A => 4,
            NasClass::B | NasClass::C => 20,
        }
    }

    pub fn weights(self) -> WeightsFile {
        let text = match self {
            NasClass::S | NasClass::W | NasClass::A => NAS_SWA,
            NasClass::B | NasClass::C => NAS_BC,
        };
        parse_weights(text).expect("bundled weights file is valid")
    }

    pub fn operators(self) -> MgOperators {
        self.weights().operators().expect("bundled weights file is valid")
    }
}

impl FromStr for NasClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S" => Ok(NasClass::S),
            "W" => Ok(NasClass::W),
            "A" => Ok(NasClass::A),
            "B" => Ok(NasClass::B),
            "C" => Ok(NasClass::C),
            _ => Err(Error::InvalidSpec(format!("unknown MG class {s:?}"))),
        }
    }
}
