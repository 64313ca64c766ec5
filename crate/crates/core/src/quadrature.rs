//! Composite Simpson rule.

/// Number of Simpson intervals for `[a, b]` at nominal panel width `step`:
/// `(b - a) / step` rounded to the nearest integer when it is one up to
/// round-off, otherwise rounded up, and then made even.
///
/// Keeping `h` an exact divisor of integer-aligned windows puts the hat
/// function's breakpoints on panel boundaries, where Simpson is exact.
pub fn interval_count(a: f64, b: f64, step: f64) -> usize {
    let raw = (b - a) / step;
    let nearest = libm::round(raw);
    let mut n = if (raw - nearest).abs() <= 1e-9 * raw.max(1.0) {
        nearest as usize
    } else {
        libm::ceil(raw) as usize
    };
    n = n.max(2);
    if n % 2 == 1 {
        n += 1;
    }
    n
}

/// Nodes and Simpson weights on `[a, b]`.
pub fn nodes(a: f64, b: f64, step: f64) -> impl Iterator<Item = (f64, f64)> {
    let n = interval_count(a, b, step);
    let h = (b - a) / n as f64;
    (0..=n).map(move |k| {
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        (a + k as f64 * h, w * h / 3.0)
    })
}

/// `\int_a^b f` by composite Simpson. Returns zero on an empty interval.
pub fn simpson(a: f64, b: f64, step: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    nodes(a, b, step).map(|(x, w)| w * f(x)).sum()
}
