//! Fixed-order Gauss–Legendre quadrature.

/// Five-point nodes on `[-1, 1]`.
const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];

const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Integrates `f` over `[a, b]`; exact for polynomials of degree up to 9.
pub fn gauss5(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    NODES.iter().zip(WEIGHTS).map(|(&t, w)| w * f(mid + half * t)).sum::<f64>() * half
}

/// Composite rule over `panels` equal panels.
pub fn composite_gauss5(a: f64, b: f64, panels: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels).map(|p| gauss5(a + p as f64 * h, a + (p + 1) as f64 * h, &f)).sum()
}
