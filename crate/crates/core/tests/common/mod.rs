//! Reference implementations shared by the integration suites. Everything
//! here is deliberately non-spectral: quadrature against the periodized
//! kernel and high-order finite differences, so the FFT-multiplier paths
//! are checked against independent discretizations.

use std::f64::consts::PI;

/// Periodized Green's function of `(1 - d_xx)` on `[0, 2pi)`:
/// `G(x) = cosh(pi - |x|) / (2 sinh(pi))` with `|x|` the circle distance.
pub fn helmholtz_kernel(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut d = x.rem_euclid(two_pi);
    if d > PI {
        d = two_pi - d;
    }
    (PI - d).cosh() / (2.0 * PI.sinh())
}

/// Convolution `(G * g)` of grid samples against the periodized kernel,
/// evaluated at every node by the trapezoid rule with the kernel-kink
/// correction `-h^2 g(x)/12` (the kink of `G` sits on a node).
pub fn kernel_convolution(g: &[f64]) -> Vec<f64> {
    let n = g.len();
    let h = 2.0 * PI / n as f64;
    let kernel: Vec<f64> = (0..n).map(|k| helmholtz_kernel(k as f64 * h)).collect();
    (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for (j, gj) in g.iter().enumerate() {
                let k = (i + n - j) % n;
                acc += kernel[k] * gj;
            }
            h * acc - h * h * g[i] / 12.0
        })
        .collect()
}

/// Sixth-order central first derivative on a periodic grid.
pub fn fd1(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let at = |i: isize| values[i.rem_euclid(n as isize) as usize];
    (0..n as isize)
        .map(|i| {
            (-at(i - 3) + 9.0 * at(i - 2) - 45.0 * at(i - 1) + 45.0 * at(i + 1) - 9.0 * at(i + 2)
                + at(i + 3))
                / (60.0 * h)
        })
        .collect()
}

/// Sixth-order central second derivative on a periodic grid.
pub fn fd2(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let at = |i: isize| values[i.rem_euclid(n as isize) as usize];
    (0..n as isize)
        .map(|i| {
            (2.0 * at(i - 3) - 27.0 * at(i - 2) + 270.0 * at(i - 1) - 490.0 * at(i)
                + 270.0 * at(i + 1)
                - 27.0 * at(i + 2)
                + 2.0 * at(i + 3))
                / (180.0 * h * h)
        })
        .collect()
}

fn hadamard(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn axpy(alpha: f64, a: &[f64], beta: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect()
}

/// One component of the nonlocal right-hand side, entirely by finite
/// differences and kernel quadrature:
/// `-(c^P t_x) - conv[(A/P) c^P_x t + ((P-A)/P) c^P_x t_xx] - conv[d_x(c^P_x t_x)]`
/// where `t` is the transported field and `c` the carrier.
fn fd_component(
    transported: &[f64],
    carrier: &[f64],
    power: u32,
    coupling: f64,
    h: f64,
) -> Vec<f64> {
    let n = transported.len();
    let mut cp = carrier.to_vec();
    for _ in 1..power {
        cp = hadamard(&cp, carrier);
    }
    let cpx = fd1(&cp, h);
    let tx = fd1(transported, h);
    let txx = fd2(transported, h);

    let pf = power as f64;
    let bracket = axpy(
        coupling / pf,
        &hadamard(&cpx, transported),
        (pf - coupling) / pf,
        &hadamard(&cpx, &txx),
    );
    let flux = hadamard(&cpx, &tx);

    let nonlocal = {
        let a = kernel_convolution(&bracket);
        let b = kernel_convolution(&fd1(&flux, h));
        axpy(1.0, &a, 1.0, &b)
    };
    let burgers = hadamard(&cp, &tx);
    (0..n).map(|i| -burgers[i] - nonlocal[i]).collect()
}

/// Full right-hand side `(u_t, v_t)` by the finite-difference route.
pub fn fd_rhs(u: &[f64], v: &[f64], p: u32, q: u32, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(u.len(), v.len());
    let h = 2.0 * PI / u.len() as f64;
    (fd_component(u, v, p, a, h), fd_component(v, u, q, b, h))
}
