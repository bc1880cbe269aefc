use super::vectors::{block_vector, h_vector, rng_for};
use super::{CheckResult, VerifyOptions};
use crate::dilation::{AssembledDilation, DilationPath};
use crate::error::{Error, Result};
use crate::hermitian::{eigh, numerical_rank, vec_dot, vec_norm_sqr, ComplexMatrix, HermitianMatrix, C64};
use crate::operator::{binomial, power_window, sign};
use crate::qsolver::verify_q;
use crate::tolerance::Tolerances;

fn window_text(h_support: usize, blocks: usize, powers: usize) -> String {
    if blocks == 0 {
        format!("h in span(e_0..e_{}), powers <= {powers}", h_support.saturating_sub(1))
    } else {
        format!(
            "h in span(e_0..e_{}), H' blocks 1..={blocks}, powers <= {powers}",
            h_support.saturating_sub(1)
        )
    }
}

fn diff_norm(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// `T*QT = Q ⪰ Δ` for paths that use `Q`.
pub fn check_q_contract(w: &AssembledDilation, tol: &Tolerances) -> Result<Option<CheckResult>> {
    let model = w.source();
    let Some(q) = &model.q else { return Ok(None) };
    let window = model.t.window_after(1)?.min(model.window);
    let (beta, _) = crate::operator::beta_form(&model.t, model.m - 1)?;
    let res = verify_q(&model.t, &q.q, &window.restrict(&beta), window)?;
    let scale = 1.0 + q.q.max_norm();
    let residual = res.stein.max((-res.dominance).max(0.0));
    Ok(Some(
        CheckResult::new("q_contract", residual, tol.stein * scale, format!("coordinates 0..{}", window.valid_dim))
            .with_detail(format!("stein {:.3e}, min eig(Q - Δ) {:.3e}", res.stein, res.dominance)),
    ))
}

/// Well-definedness of `A`, `A ⪯ 0`, `B² = I − A`, and on the general path `T*U*UT = U*U`.
pub fn check_model_invariants(w: &AssembledDilation, tol: &Tolerances) -> Result<Vec<CheckResult>> {
    let model = w.source();
    let r = model.hprime_dim();
    let scope = format!("H' of dimension {r}");
    let mut out = Vec::new();

    let x_scale = 1.0 + model.beta_m.max_norm();
    out.push(CheckResult::new(
        "form_well_defined",
        model.welldef_residual,
        tol.welldef * x_scale,
        format!("coordinates 0..{}", model.window.valid_dim),
    ));

    let a_max = eigh(&model.a)?.max_value().unwrap_or(0.0).max(0.0);
    out.push(CheckResult::new("a_nonpositive", a_max, tol.psd * (1.0 + model.a.max_norm()), scope.clone()));

    let b_sq = HermitianMatrix::symmetrize(model.b.as_matrix().matmul(model.b.as_matrix()));
    let b_res = b_sq.sub(&HermitianMatrix::identity(r).sub(&model.a)).max_norm();
    out.push(CheckResult::new("b_squared", b_res, tol.sqrt * (1.0 + model.a.max_norm()), scope));

    if model.path == DilationPath::GeneralM {
        let u2 = w.u().adjoint_mul(w.u());
        let t = model.t.matrix();
        // U vanishes beyond the window, so T must not leave it.
        let band = if model.t.is_exact() { model.t.bandwidth() } else { 0 };
        let v = model.window.valid_dim.saturating_sub(band);
        let res = (&u2.congruence(t) - &u2).leading(v).max_norm();
        out.push(CheckResult::new(
            "u_stein_identity",
            res,
            tol.stein * (1.0 + u2.max_norm()),
            format!("coordinates 0..{v}"),
        ));
    }
    Ok(out)
}

/// `max_{n ≤ n_max} ‖(W^n)_{00} − T^n‖_max` on the exact window of `T^n`.
pub fn check_dilation_property(w: &AssembledDilation, n_max: usize, tol: &Tolerances) -> Result<CheckResult> {
    let l = w.layout();
    if n_max > l.n_blocks {
        return Err(Error::Precondition(format!("n_max = {n_max} exceeds n_blocks = {}", l.n_blocks)));
    }
    let t = w.t();
    let n = l.h_dim;
    // Columns W^k e_j for j < N, advanced one power at a time.
    let mut cols = ComplexMatrix::zeros(l.total_dim(), n);
    cols.set_block(0, 0, &ComplexMatrix::identity(n));
    let mut residual: f64 = 0.0;
    let mut smallest = n;
    for k in 1..=n_max {
        cols = w.w().matmul(&cols);
        let Ok((tk, window)) = power_window(t, k) else { break };
        let v = window.valid_dim;
        smallest = smallest.min(v);
        let top = cols.block(0, 0, v, v);
        residual = residual.max((&top - &tk.leading(v)).max_norm());
    }
    Ok(CheckResult::new(
        "dilation_property",
        residual,
        tol.dilation,
        format!("compression to H, coordinates 0..{smallest}, powers <= {n_max}"),
    ))
}

fn s_product_apply(w: &AssembledDilation, from: usize, to: usize, v: &[C64]) -> Vec<C64> {
    // S_{to}⋯S_{from} v, applied right to left.
    let mut out = v.to_vec();
    for j in from..=to {
        out = w.weight(j).matvec(&out);
    }
    out
}

fn slice_block(w: &AssembledDilation, x: &[C64], b: usize) -> Vec<C64> {
    let l = w.layout();
    let off = l.offset(b);
    x[off..off + l.block_dim(b)].to_vec()
}

/// Block-by-block comparison of `W^m x` with the explicit power formula.
pub fn check_powers_formula(w: &AssembledDilation, m: usize, opts: VerifyOptions, tol: &Tolerances) -> Result<CheckResult> {
    let l = w.layout();
    let model = w.source();
    if m >= l.n_blocks {
        return Err(Error::WindowExhausted { size: l.n_blocks, lost: m });
    }
    let h_support = model.h_support()?;
    let last_block = l.n_blocks - m;
    let t = w.t().matrix();
    let mut rng = rng_for(opts.seed, 1);
    let mut residual: f64 = 0.0;
    for _ in 0..opts.trials {
        let x = block_vector(&mut rng, l, h_support, last_block);
        let mut y = x.clone();
        for _ in 0..m {
            y = w.w().matvec(&y);
        }
        let h0 = slice_block(w, &x, 0);
        let mut t_pows = vec![h0];
        for k in 1..=m {
            let next = t.matvec(&t_pows[k - 1]);
            t_pows.push(next);
        }
        let mut expect = vec![C64::new(0.0, 0.0); l.total_dim()];
        expect[..l.h_dim].copy_from_slice(&t_pows[m]);
        for k in 1..=l.n_blocks {
            let block = if k <= m {
                let uh = w.u().matvec(&t_pows[m - k]);
                s_product_apply(w, 1, k - 1, &uh)
            } else {
                s_product_apply(w, k - m, k - 1, &slice_block(w, &x, k - m))
            };
            let off = l.offset(k);
            expect[off..off + l.hprime_dim].copy_from_slice(&block);
        }
        let scale = vec_norm_sqr(&x).sqrt().max(f64::MIN_POSITIVE);
        residual = residual.max(diff_norm(&y, &expect) / scale);
    }
    Ok(CheckResult::new("powers_formula", residual, tol.powers, window_text(h_support, last_block, m)))
}

/// `max |Σ_k (−1)^{m−k} C(m,k) ‖W^k x‖²| / ‖x‖²` over windowed `x`.
pub fn check_w_m_isometry(w: &AssembledDilation, m: usize, opts: VerifyOptions, tol: &Tolerances) -> Result<CheckResult> {
    let l = w.layout();
    let model = w.source();
    if m >= l.n_blocks {
        return Err(Error::WindowExhausted { size: l.n_blocks, lost: m });
    }
    let h_support = model.h_support()?;
    let last_block = l.n_blocks - m;
    let mut rng = rng_for(opts.seed, 2);
    let mut residual: f64 = 0.0;
    for _ in 0..opts.trials {
        let x = block_vector(&mut rng, l, h_support, last_block);
        let norm_sq = vec_norm_sqr(&x);
        let mut y = x.clone();
        let mut acc = 0.0;
        for k in 0..=m {
            if k > 0 {
                y = w.w().matvec(&y);
            }
            acc += sign(m, k) * binomial(m, k) * vec_norm_sqr(&y);
        }
        residual = residual.max(acc.abs() / norm_sq.max(f64::MIN_POSITIVE));
    }
    Ok(CheckResult::new("w_m_isometry", residual, tol.isometry, window_text(h_support, last_block, m)))
}

/// `⟨β_m h,h⟩ + Σ_ℓ (−1)^{m−ℓ} C(m,ℓ) Σ_{k≤ℓ} ‖S_{k−1}⋯S_1 U T^{ℓ−k} h‖²`, relative to `‖h‖²`.
pub fn check_criterion_identity(w: &AssembledDilation, opts: VerifyOptions, tol: &Tolerances) -> Result<CheckResult> {
    let model = w.source();
    let m = model.m;
    let h_support = model.h_support()?;
    let n = model.h_dim();
    let beta = model.beta_m.as_matrix();
    let wdim = beta.rows();
    let t = model.t.matrix();
    let mut rng = rng_for(opts.seed, 3);
    let mut residual: f64 = 0.0;
    for _ in 0..opts.trials {
        let h = h_vector(&mut rng, n, h_support);
        let hw = &h[..wdim];
        let mut total = vec_dot(hw, &beta.matvec(hw)).re;
        let mut t_pows = vec![h.clone()];
        for k in 1..m {
            let next = t.matvec(&t_pows[k - 1]);
            t_pows.push(next);
        }
        for ell in 1..=m {
            let mut inner = 0.0;
            for k in 1..=ell {
                let uh = w.u().matvec(&t_pows[ell - k]);
                inner += vec_norm_sqr(&s_product_apply(w, 1, k - 1, &uh));
            }
            total += sign(m, ell) * binomial(m, ell) * inner;
        }
        residual = residual.max(total.abs() / vec_norm_sqr(&h).max(f64::MIN_POSITIVE));
    }
    Ok(CheckResult::new("criterion_identity", residual, tol.criterion, window_text(h_support, 0, m - 1)))
}

/// m-th forward difference of `n ↦ |S_n⋯S_1|²` built from the blocks of `W`,
/// i.e. the m-isometry of the weight shift. Failing offsets are listed.
pub fn check_p_difference(w: &AssembledDilation, tol: &Tolerances) -> CheckResult {
    let l = w.layout();
    let m = w.m();
    let r = l.hprime_dim;
    let mut cumulative = vec![ComplexMatrix::identity(r)];
    let mut prod = ComplexMatrix::identity(r);
    for j in 1..l.n_blocks {
        prod = w.weight(j).matmul(&prod);
        cumulative.push(prod.adjoint_mul(&prod));
    }
    let last = cumulative.len().saturating_sub(m + 1);
    let mut residual: f64 = 0.0;
    let mut failing = Vec::new();
    for n in 0..=last {
        if n + m >= cumulative.len() {
            break;
        }
        let mut acc = ComplexMatrix::zeros(r, r);
        for k in 0..=m {
            acc = &acc + &cumulative[n + k].scale_real(sign(m, k) * binomial(m, k));
        }
        let v = acc.max_norm();
        if v > tol.p_difference {
            failing.push(n);
        }
        residual = residual.max(v);
    }
    let res = CheckResult::new(
        "p_difference",
        residual,
        tol.p_difference,
        format!("offsets 0..={last}, weights S_1..S_{}", l.n_blocks - 1),
    );
    if failing.is_empty() {
        res
    } else {
        res.with_detail(format!("failing offsets {failing:?}"))
    }
}

/// `dim − rank [W^n e_j]` over `n ≤ n_blocks` and `j < N`.
pub fn check_minimality(w: &AssembledDilation, tol: &Tolerances) -> CheckResult {
    let l = w.layout();
    if l.hprime_dim == 0 {
        return CheckResult::new("minimality", 0.0, 0.0, "H' = {0}: vacuous".into());
    }
    let total = l.total_dim();
    let n = l.h_dim;
    let mut all = ComplexMatrix::zeros(total, n * (l.n_blocks + 1));
    let mut cols = ComplexMatrix::zeros(total, n);
    cols.set_block(0, 0, &ComplexMatrix::identity(n));
    for k in 0..=l.n_blocks {
        if k > 0 {
            cols = w.w().matmul(&cols);
        }
        all.set_block(0, k * n, &cols);
    }
    let rank = numerical_rank(&all, tol.rank);
    CheckResult::new(
        "minimality",
        total.saturating_sub(rank) as f64,
        0.0,
        format!("span of W^n H, n <= {}, dimension {total}", l.n_blocks),
    )
    .with_detail(format!("rank {rank} of {total}"))
}

/// `‖S_{m−1} − I‖ ≤ tol` iff `‖β_m‖ ≤ tol` on the window; only meaningful
/// on the general path.
pub fn remark_consistency(w: &AssembledDilation, tol: &Tolerances) -> CheckResult {
    let model = w.source();
    if model.path != DilationPath::GeneralM {
        return CheckResult::new("remark_consistency", 0.0, 0.0, format!("not applicable to {}", model.path.name()));
    }
    if model.hprime_dim() == 0 {
        return CheckResult::new("remark_consistency", 0.0, 0.0, "H' = {0}: vacuous".into());
    }
    let m = model.m;
    let s = w.weight(m - 1);
    let s_dev = (s - &ComplexMatrix::identity(s.rows())).max_norm();
    let beta_norm = model.beta_m.max_norm();
    let s_is_identity = s_dev <= tol.remark;
    let isometric = beta_norm <= tol.remark;
    CheckResult::new(
        "remark_consistency",
        if s_is_identity == isometric { 0.0 } else { 1.0 },
        0.0,
        format!("S_{} and β_{m} on coordinates 0..{}", m - 1, model.window.valid_dim),
    )
    .with_detail(format!("‖S_{} − I‖ = {s_dev:.3e}, ‖β_{m}‖ = {beta_norm:.3e}", m - 1))
}
