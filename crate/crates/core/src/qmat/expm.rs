use super::CMatrix;

/// Matrix exponential by scaling and squaring around a truncated Taylor series.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most 1/4; the
/// series is summed until the next term is below machine precision relative
/// to the partial sum.
pub fn expm(a: &CMatrix) -> CMatrix {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.rows();
    let norm = a.norm_1();
    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > 0.25 {
        scaled_norm *= 0.5;
        squarings += 1;
    }
    let x = a.scale_re(libm::ldexp(1.0, -(squarings as i32)));

    let mut sum = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=40 {
        term = (&term * &x).scale_re(1.0 / k as f64);
        sum = &sum + &term;
        if term.norm_1() <= f64::EPSILON * 1e-2 * sum.norm_1() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
