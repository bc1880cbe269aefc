use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dilation::BlockLayout;
use crate::hermitian::C64;

/// Independent stream per check so adding a check leaves the others' draws unchanged.
pub(super) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Complex Gaussian vector of length `len` supported on `0..support`.
pub(super) fn h_vector(rng: &mut ChaCha8Rng, len: usize, support: usize) -> Vec<C64> {
    (0..len)
        .map(|i| if i < support { gaussian(rng) } else { C64::new(0.0, 0.0) })
        .collect()
}

/// Vector on the dilation space with `H` part on `0..h_support` and full
/// `H′` blocks `1..=last_block`.
pub(super) fn block_vector(rng: &mut ChaCha8Rng, layout: BlockLayout, h_support: usize, last_block: usize) -> Vec<C64> {
    let mut x = vec![C64::new(0.0, 0.0); layout.total_dim()];
    for xi in x.iter_mut().take(h_support) {
        *xi = gaussian(rng);
    }
    for b in 1..=last_block.min(layout.n_blocks) {
        let off = layout.offset(b);
        for xi in &mut x[off..off + layout.hprime_dim] {
            *xi = gaussian(rng);
        }
    }
    x
}
