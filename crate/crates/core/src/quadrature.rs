//! Fixed quadrature rules shared by the assembly and energy routines.
//!
//! Triangle integrals are evaluated as `|T| * sum(w_i * f(bary_i))` and edge
//! integrals as `|F| * sum(w_i * f(t_i))`, i.e. all weights sum to one.

/// Symmetric 6-point triangle rule, exact for total degree 4.
///
/// Every weighted integrand assembled in this crate (phase-field chemistry,
/// Brinkman weights, products with linear basis functions) has total degree
/// at most 4, so this rule introduces no quadrature error for them.
pub const TRI_DEGREE4: [([f64; 3], f64); 6] = {
    const A1: f64 = 0.445948490915964886;
    const B1: f64 = 0.108103018168070228; // 1 - 2*A1
    const W1: f64 = 0.223381589678011472;
    const A2: f64 = 0.091576213509770743;
    const B2: f64 = 0.816847572980458514; // 1 - 2*A2
    const W2: f64 = 0.109951743655321868;
    [
        ([B1, A1, A1], W1),
        ([A1, B1, A1], W1),
        ([A1, A1, B1], W1),
        ([B2, A2, A2], W2),
        ([A2, B2, A2], W2),
        ([A2, A2, B2], W2),
    ]
};

/// Centroid rule, exact for linear integrands.
pub const TRI_CENTROID: [([f64; 3], f64); 1] = [([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 1.0)];

/// 4-point Gauss-Legendre rule on [0, 1], exact for degree 7.
///
/// Used for edge averages of boundary data; the steepest inlet profile in the
/// benchmark set is a quartic, which this rule integrates exactly.
pub const EDGE_GAUSS4: [(f64, f64); 4] = {
    const T1: f64 = 0.339981043584856265; // Legendre nodes on [-1, 1]
    const T2: f64 = 0.861136311594052575;
    const W1: f64 = 0.652145154862546143;
    const W2: f64 = 0.347854845137453857;
    [
        (0.5 * (1.0 - T2), 0.5 * W2),
        (0.5 * (1.0 - T1), 0.5 * W1),
        (0.5 * (1.0 + T1), 0.5 * W1),
        (0.5 * (1.0 + T2), 0.5 * W2),
    ]
};

/// Maps a barycentric point to physical coordinates.
pub fn bary_to_xy(p: &[[f64; 2]; 3], bary: [f64; 3]) -> [f64; 2] {
    [
        bary[0] * p[0][0] + bary[1] * p[1][0] + bary[2] * p[2][0],
        bary[0] * p[0][1] + bary[1] * p[1][1] + bary[2] * p[2][1],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    // Exact integral of x^a y^b over the reference triangle {x,y>=0, x+y<=1}:
    // a! b! / (a + b + 2)!.
    fn monomial_exact(a: u32, b: u32) -> f64 {
        let fact = |n: u32| (1..=n).map(|k| k as f64).product::<f64>().max(1.0);
        fact(a) * fact(b) / fact(a + b + 2)
    }

    #[test]
    fn tri_rule_weights_sum_to_one() {
        let s: f64 = TRI_DEGREE4.iter().map(|(_, w)| w).sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tri_rule_exact_through_degree_four() {
        let p = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        for a in 0..=4u32 {
            for b in 0..=(4 - a) {
                let mut q = 0.0;
                for (bary, w) in TRI_DEGREE4 {
                    let [x, y] = bary_to_xy(&p, bary);
                    q += w * x.powi(a as i32) * y.powi(b as i32);
                }
                q *= 0.5; // reference triangle area
                let exact = monomial_exact(a, b);
                assert!(
                    (q - exact).abs() <= 1e-15 + 1e-14 * exact.abs(),
                    "x^{a} y^{b}: {q} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn edge_rule_exact_through_degree_seven() {
        for k in 0..=7u32 {
            let q: f64 = EDGE_GAUSS4
                .iter()
                .map(|&(t, w)| w * t.powi(k as i32))
                .sum();
            let exact = 1.0 / (k as f64 + 1.0);
            assert!((q - exact).abs() < 1e-15, "t^{k}: {q} vs {exact}");
        }
    }
}
