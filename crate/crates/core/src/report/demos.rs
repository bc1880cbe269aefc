use std::collections::BTreeMap;

use super::pipeline::{run_pipeline, ReportFile};
use super::spec::{OperatorSpec, OperatorSpecFile, Truncation, SCHEMA_VERSION};
use crate::dilation::DilationPath;
use crate::error::{Error, Result};
use crate::operator::WeightRule;

pub const DEMO_N: usize = 32;
pub const DEMO_BLOCKS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Demo {
    pub name: &'static str,
    pub summary: &'static str,
}

pub const DEMOS: [Demo; 6] = [
    Demo {
        name: "dirichlet-2iso",
        summary: "Dirichlet shift, m = 2: already 2-isometric, A = 0 and all weights are I",
    },
    Demo {
        name: "strict-2concave",
        summary: "shift with w_j^2 = 1 + 2^-j, m = 2: strictly 2-concave, S_1 = B != I",
    },
    Demo {
        name: "scalar-3concave",
        summary: "scalar t = 1/sqrt(2), m = 3: not expansive, built by the three_concave path",
    },
    Demo {
        name: "zero-operator",
        summary: "T = 0, m = 3: the dilation is the unweighted shift over U = I",
    },
    Demo {
        name: "unitary",
        summary: "4x4 unitary, m = 2: degenerate dilation W = T",
    },
    Demo {
        name: "nonisomorphic-pair",
        summary: "w_j^2 = 1 + 2^-j, m = 2: general and reference dilations differ by a norm gap",
    },
];

fn shift(rule: WeightRule, m: usize, path: Option<DilationPath>) -> OperatorSpecFile {
    OperatorSpecFile {
        schema_version: SCHEMA_VERSION,
        operator: OperatorSpec::Shift { rule },
        m,
        path,
        truncation: Truncation {
            n: Some(DEMO_N),
            n_blocks: DEMO_BLOCKS,
            horizon: None,
        },
        tolerances: BTreeMap::new(),
        seed: None,
    }
}

fn dense(entries: Vec<Vec<[f64; 2]>>, m: usize) -> OperatorSpecFile {
    OperatorSpecFile {
        schema_version: SCHEMA_VERSION,
        operator: OperatorSpec::Dense { entries },
        m,
        path: None,
        truncation: Truncation {
            n: None,
            n_blocks: DEMO_BLOCKS,
            horizon: None,
        },
        tolerances: BTreeMap::new(),
        seed: None,
    }
}

/// Discrete Fourier matrix on `C^4`, normalized.
fn dft4() -> Vec<Vec<[f64; 2]>> {
    // ω = i, entries ω^{jk}/2.
    let powers = [[0.5, 0.0], [0.0, 0.5], [-0.5, 0.0], [0.0, -0.5]];
    (0..4).map(|j| (0..4).map(|k| powers[(j * k) % 4]).collect()).collect()
}

/// Pinned spec of a catalog demo.
pub fn demo_spec(name: &str) -> Result<OperatorSpecFile> {
    let half = WeightRule::GeometricConcave { r: 0.5 };
    Ok(match name {
        "dirichlet-2iso" => shift(WeightRule::Dirichlet, 2, None),
        "strict-2concave" => shift(half, 2, None),
        "nonisomorphic-pair" => shift(half, 2, Some(DilationPath::GeneralM)),
        "scalar-3concave" => dense(vec![vec![[std::f64::consts::FRAC_1_SQRT_2, 0.0]]], 3),
        "zero-operator" => dense(vec![vec![[0.0, 0.0]]], 3),
        "unitary" => dense(dft4(), 2),
        _ => return Err(Error::UnknownDemo(name.to_string())),
    })
}

pub fn demo(name: &str) -> Result<ReportFile> {
    run_pipeline(&demo_spec(name)?)
}
