use serde::{Deserialize, Serialize};

/// Every numerical threshold used by the construction and the checks.
///
/// Residual-type tolerances are relative: a quantity `r` measured on a
/// matrix `X` passes when `r <= tol * (1 + ‖X‖_max)` unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Hermitian defect accepted when wrapping a matrix.
    pub herm: f64,
    /// Negative eigenvalues above `-psd * (1 + ‖X‖)` count as zero.
    pub psd: f64,
    /// Reconstruction residual of the principal square root.
    pub sqrt: f64,
    /// Relative eigenvalue cutoff for numerical range and rank.
    pub rank: f64,
    /// Eigendecomposition reconstruction and unitarity residual.
    pub eig: f64,
    /// Commutator defect accepted for polynomial coefficients.
    pub comm: f64,
    /// Smallest eigenvalue a shift weight may have.
    pub inv: f64,
    /// Stein residual `‖T*QT - Q‖`.
    pub stein: f64,
    /// Residual certifying that the defining form is well defined.
    pub welldef: f64,
    /// Step size at which the fixed-point Q iteration stops.
    pub fixed_point: f64,
    /// Plateau tolerance for the running maximum in the diagonal Q solver.
    pub plateau: f64,
    /// m-isometry residual of the assembled dilation.
    pub isometry: f64,
    /// Compression residual `P_H W^n|_H - T^n`.
    pub dilation: f64,
    /// Power-formula residual.
    pub powers: f64,
    /// Criterion-identity residual.
    pub criterion: f64,
    /// m-th forward difference of the cumulative weight moduli.
    pub p_difference: f64,
    /// Threshold deciding `S_{m-1} = I` and `β_m = 0`.
    pub remark: f64,
    /// A norm gap above this certifies non-isomorphism.
    pub cert: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-9,
            psd: 1e-9,
            sqrt: 1e-9,
            rank: 1e-10,
            eig: 1e-11,
            comm: 1e-10,
            inv: 1e-12,
            stein: 1e-10,
            welldef: 1e-9,
            fixed_point: 1e-14,
            plateau: 1e-9,
            isometry: 1e-10,
            dilation: 1e-12,
            powers: 1e-11,
            criterion: 1e-10,
            p_difference: 1e-11,
            remark: 1e-9,
            cert: 1e-6,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 18] = [
        "herm",
        "psd",
        "sqrt",
        "rank",
        "eig",
        "comm",
        "inv",
        "stein",
        "welldef",
        "fixed_point",
        "plateau",
        "isometry",
        "dilation",
        "powers",
        "criterion",
        "p_difference",
        "remark",
        "cert",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "herm" => &mut self.herm,
            "psd" => &mut self.psd,
            "sqrt" => &mut self.sqrt,
            "rank" => &mut self.rank,
            "eig" => &mut self.eig,
            "comm" => &mut self.comm,
            "inv" => &mut self.inv,
            "stein" => &mut self.stein,
            "welldef" => &mut self.welldef,
            "fixed_point" => &mut self.fixed_point,
            "plateau" => &mut self.plateau,
            "isometry" => &mut self.isometry,
            "dilation" => &mut self.dilation,
            "powers" => &mut self.powers,
            "criterion" => &mut self.criterion,
            "p_difference" => &mut self.p_difference,
            "remark" => &mut self.remark,
            "cert" => &mut self.cert,
            _ => return None,
        })
    }

    /// Overrides one tolerance by name. Returns `false` for unknown names
    /// and for values that are not finite and positive.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        if !(value.is_finite() && value > 0.0) {
            return false;
        }
        match self.slot(name) {
            Some(slot) => {
                *slot = value;
                true
            }
            None => false,
        }
    }
}
