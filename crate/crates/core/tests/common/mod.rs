//! Shared oracles for the integration suites.

use fusionlab_core::LaurentPoly;

/// Weighted sphere sizes of the free unitary model over its canonical set,
/// from the power-series expansion of the rational generating function
/// `z^2 (1 + z) / P_q(z)` at infinity: with `u = 1/z`,
/// `(1 - a u + b u^2 - 2 u^3) G(u) = 1 + u` gives
/// `g_0 = 1`, `g_1 = a + 1`, `g_2 = a g_1 - b`, `g_n = a g_{n-1} - b g_{n-2} + 2 g_{n-3}`.
///
/// This route never touches the dynamic program it checks.
pub fn series_sphere_sizes(depth: usize) -> Vec<LaurentPoly> {
    let a = LaurentPoly::constant(2) * LaurentPoly::q_power(-2)
        + LaurentPoly::constant(3)
        + LaurentPoly::constant(2) * LaurentPoly::q_power(2);
    let b = LaurentPoly::constant(2)
        * (LaurentPoly::q_power(-2) + LaurentPoly::one() + LaurentPoly::q_power(2));
    let two = LaurentPoly::constant(2);
    let mut g: Vec<LaurentPoly> = vec![LaurentPoly::one(), &a + &LaurentPoly::one()];
    for n in 2..=depth {
        let mut next = &a * &g[n - 1] - &b * &g[n - 2];
        if n >= 3 {
            next = &next + &(&two * &g[n - 3]);
        }
        g.push(next);
    }
    g.truncate(depth + 1);
    g
}

/// Plain xorshift for reproducible sampling without extra dependencies.
pub struct Xorshift(pub u64);

impl Xorshift {
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
