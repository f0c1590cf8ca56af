use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;

use super::{int, AlgebraicConstant, IntPoly, Scalar};
use crate::error::{Error, Result};

/// Session table of declared constants, keyed by label.
#[derive(Clone, Debug, Default)]
pub struct Constants {
    map: BTreeMap<String, AlgebraicConstant>,
}

const RESERVED: &[&str] = &["x", "t", "inf", "end", "tail", "marker", "root", "const", "unbounded"];

impl Constants {
    pub fn new() -> Self {
        Constants::default()
    }

    /// sqrt2, sqrt3, sqrt5, cbrt2, cbrt4: Q-linearly independent together with 1.
    /// Built once per process; the table is cheap to clone.
    pub fn builtin() -> Self {
        static BUILTIN: OnceLock<Constants> = OnceLock::new();
        BUILTIN
            .get_or_init(|| {
                let mut c = Constants::new();
                let defs: [(&str, &[i64], i64, i64); 5] = [
                    ("sqrt2", &[-2, 0, 1], 1, 2),
                    ("sqrt3", &[-3, 0, 1], 1, 2),
                    ("sqrt5", &[-5, 0, 1], 2, 3),
                    ("cbrt2", &[-2, 0, 0, 1], 1, 2),
                    ("cbrt4", &[-4, 0, 0, 1], 1, 2),
                ];
                for (label, poly, lo, hi) in defs {
                    let p = IntPoly::new(poly.iter().map(|&k| BigInt::from(k)).collect());
                    let k = AlgebraicConstant::new(label, p, int(lo), int(hi)).expect("builtin constants are valid");
                    c.map.insert(label.to_string(), k);
                }
                c
            })
            .clone()
    }

    pub fn declare(&mut self, constant: AlgebraicConstant) -> Result<()> {
        let label = constant.label().to_string();
        let valid = label.chars().next().is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
            && label.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
        if !valid || RESERVED.contains(&label.as_str()) {
            return Err(Error::config(format!("invalid constant label {label:?}")));
        }
        // redeclaring a builtin label replaces it; duplicates within one header are caught by the parser
        self.map.insert(label, constant);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Result<&AlgebraicConstant> {
        self.map.get(label).ok_or_else(|| Error::config(format!("unknown constant {label:?}")))
    }

    pub fn scalar(&self, label: &str) -> Result<Scalar> {
        Ok(Scalar::constant(self.get(label)?))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.map.contains_key(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AlgebraicConstant> {
        self.map.values()
    }
}
