use serde::{Deserialize, Serialize};

use super::CheckResult;
use crate::dilation::{AssembledDilation, DilationPath};
use crate::error::{Error, Result};
use crate::hermitian::{eigh, HermitianMatrix};
use crate::tolerance::Tolerances;

/// Norm-gap obstruction to an isomorphism fixing `H`: for `h ∈ H`,
/// `gap(h) = ‖W(h,0,…)‖² − ‖W′(h,0,…)‖²` must vanish identically if the two
/// dilations are isomorphic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `max |gap(h)|` over unit `h` in the window.
    pub gap_max: f64,
    /// `gap(e_0)`.
    pub gap_e0: f64,
    /// Coordinate carrying most of the maximizing `h`.
    pub witness_coordinate: usize,
    pub window: usize,
    pub cert_tol: f64,
    /// Non-isomorphism certified: `gap_max > cert_tol`.
    pub found: bool,
}

/// Compares the general 2-isometric dilation with the reference one built
/// from the same `T` and `Q`.
///
/// Returns the certificate together with a check that the gap form equals
/// `β_1(T)` on the window, which is what makes the gap an obstruction.
pub fn nonisomorphism_certificate(
    general: &AssembledDilation,
    badea: &AssembledDilation,
    tol: &Tolerances,
) -> Result<(Certificate, CheckResult)> {
    let (g, b) = (general.source(), badea.source());
    if g.path != DilationPath::GeneralM || b.path != DilationPath::Badea2Iso || g.m != 2 {
        return Err(Error::Precondition(
            "certificate compares a general m = 2 dilation with a badea_2iso one".into(),
        ));
    }
    if g.t != b.t || g.q.as_ref().map(|q| &q.q) != b.q.as_ref().map(|q| &q.q) {
        return Err(Error::Precondition("both dilations must come from the same T and Q".into()));
    }
    let window = g.window.min(b.window).valid_dim;
    // ‖W(h,0,…)‖² = ‖Th‖² + ‖Uh‖²; the T parts cancel.
    let gram = |w: &AssembledDilation| w.u().adjoint_mul(w.u()).leading(window);
    let form = HermitianMatrix::symmetrize(&gram(general) - &gram(badea));
    let e = eigh(&form)?;
    let (mut gap_max, mut idx) = (0.0f64, None);
    for (j, &l) in e.values.iter().enumerate() {
        if l.abs() > gap_max {
            gap_max = l.abs();
            idx = Some(j);
        }
    }
    let witness_coordinate = idx.map_or(0, |j| {
        let col = e.basis.column(j);
        (0..col.len())
            .max_by(|&a, &b| col[a].norm().total_cmp(&col[b].norm()))
            .unwrap_or(0)
    });
    let gap_e0 = if window > 0 { form.as_matrix()[(0, 0)].re } else { 0.0 };
    let cert = Certificate {
        gap_max,
        gap_e0,
        witness_coordinate,
        window,
        cert_tol: tol.cert,
        found: gap_max > tol.cert,
    };
    let beta_1 = b.delta.leading(window);
    let residual = form.sub(&beta_1).max_norm();
    let check = CheckResult::new(
        "nonisomorphism_dichotomy",
        residual,
        tol.remark * (1.0 + beta_1.max_norm()),
        format!("h in span(e_0..e_{})", window.saturating_sub(1)),
    )
    .with_detail(format!(
        "gap(e_0) = {gap_e0:.6e}, max gap = {gap_max:.6e}, certificate {}",
        if cert.found { "found" } else { "not found" }
    ));
    Ok((cert, check))
}
