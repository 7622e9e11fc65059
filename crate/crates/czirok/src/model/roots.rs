use super::{GSpec, ModelError};

/// Scan-then-bisect settings for solving `xi = G(xi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootScan {
    /// Grid resolution used to detect sign changes of `xi - G(xi)`.
    pub step: f64,
    /// Target for both bracket width and residual `|xi - G(xi)|`.
    pub tol: f64,
}

impl Default for RootScan {
    fn default() -> Self {
        RootScan {
            step: 1e-2,
            tol: 1e-10,
        }
    }
}

/// Solutions of the compatibility condition `xi = G(xi)` inside `[lo, hi]`,
/// sorted ascending. Zero is always returned; because `G` is odd the positive
/// roots are located on `(0, min(-lo, hi)]` and mirrored, so the output is
/// exactly sign-symmetric.
pub fn compatibility_roots(g: &GSpec, lo: f64, hi: f64, tol: f64) -> Result<Vec<f64>, ModelError> {
    compatibility_roots_with(
        g,
        lo,
        hi,
        &RootScan {
            tol,
            ..RootScan::default()
        },
    )
}

pub fn compatibility_roots_with(
    g: &GSpec,
    lo: f64,
    hi: f64,
    scan: &RootScan,
) -> Result<Vec<f64>, ModelError> {
    let bracket_err = |reason: &str| ModelError::Bracket {
        lo,
        hi,
        reason: reason.to_string(),
    };
    g.validate()?;
    if !(scan.tol > 0.0 && scan.step > 0.0) {
        return Err(bracket_err("scan step and tolerance must be positive"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < 0.0 && hi > 0.0) {
        return Err(bracket_err("interval must be finite and contain zero in its interior"));
    }
    let half_width = hi.min(-lo);
    let n_steps = (half_width / scan.step).floor() as usize;
    if n_steps < 1 {
        return Err(bracket_err("interval narrower than the scan resolution"));
    }

    let f = |xi: f64| xi - g.eval(xi);
    let mut positive = Vec::new();
    let mut prev_x = scan.step;
    let mut prev_f = f(prev_x);
    if !prev_f.is_finite() {
        return Err(bracket_err("G is not finite on the scan grid"));
    }
    if prev_f == 0.0 {
        positive.push(prev_x);
    }
    for j in 2..=n_steps {
        let x = j as f64 * scan.step;
        let fx = f(x);
        if !fx.is_finite() {
            return Err(bracket_err("G is not finite on the scan grid"));
        }
        if fx == 0.0 {
            positive.push(x);
        } else if prev_f != 0.0 && (fx < 0.0) != (prev_f < 0.0) {
            positive.push(bisect(&f, prev_x, x, prev_f, scan.tol).ok_or_else(|| {
                bracket_err("bisection did not reach the residual tolerance")
            })?);
        }
        prev_x = x;
        prev_f = fx;
    }

    let mut roots: Vec<f64> = positive.iter().rev().map(|r| -r).collect();
    roots.push(0.0);
    roots.extend(positive);
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, tol: f64) -> Option<f64> {
    for _ in 0..300 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || ((b - a) <= tol && fm.abs() <= tol) {
            return Some(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if b - a <= f64::EPSILON * m.abs() {
            return (fm.abs() <= tol).then_some(m);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain bisection on a caller-supplied bracket.
    fn oracle_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if (f(m) > 0.0) == (f(a) > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn cubic_h6_three_roots() {
        let g = GSpec::cubic(6.0);
        let roots = compatibility_roots(&g, -10.0, 10.0, 1e-10).unwrap();
        assert_eq!(roots.len(), 3);
        let xi_e = 5.0 * (2.0f64 / 6.0).sqrt();
        assert!((roots[2] - 2.886751).abs() < 1e-6);
        assert!((roots[2] - xi_e).abs() < 1e-9);
        assert_eq!(roots[0], -roots[2]);
        assert_eq!(roots[1], 0.0);
        for r in &roots {
            assert!((r - g.eval(*r)).abs() <= 1e-10);
        }
    }

    #[test]
    fn cubic_h2_only_zero() {
        let roots = compatibility_roots(&GSpec::cubic(2.0), -10.0, 10.0, 1e-10).unwrap();
        assert_eq!(roots, vec![0.0]);
    }

    #[test]
    fn tanh_roots_match_oracle() {
        let g = GSpec::tanh(2.0);
        let roots = compatibility_roots(&g, -5.0, 5.0, 1e-10).unwrap();
        let oracle = oracle_root(|x| x - 2.0 * x.tanh(), 1.0, 3.0);
        assert!((oracle - 1.9150).abs() < 1e-4);
        assert_eq!(roots.len(), 3);
        assert!((roots[2] - oracle).abs() < 1e-9);
        assert_eq!(roots[0], -roots[2]);
    }

    #[test]
    fn bad_brackets() {
        let g = GSpec::cubic(6.0);
        assert!(matches!(
            compatibility_roots(&g, 1.0, 5.0, 1e-10),
            Err(ModelError::Bracket { .. })
        ));
        assert!(compatibility_roots(&g, -0.001, 0.001, 1e-10).is_err());
        assert!(compatibility_roots(&g, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn asymmetric_bracket_stays_symmetric() {
        let g = GSpec::cubic(6.0);
        let roots = compatibility_roots(&g, -2.0, 10.0, 1e-10).unwrap();
        assert_eq!(roots, vec![0.0]);
    }
}
