//! Witness search for the maximal rank and inertias.
//!
//! Uniform integer draws miss a maximum whenever the matrices reaching it form
//! a thin region. The candidates here come from the centres of `φ`, from
//! directions built on the eigenvectors of `BMB*`, and from a float local
//! search on the eigenvalues of `±φ`. Each candidate is converted exactly to
//! a Gaussian-rational matrix and evaluated exactly by the caller; the floats
//! only decide which matrices are tried.

use argmin::core::{CostFunction, Executor, Gradient};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::matrix::{product, Matrix};
use crate::qmvf::QmvfProblem;
use crate::random;
use crate::scalar::Scalar;
use crate::GaussianRational as Q;

type CM = DMatrix<Complex64>;

const SOFTMIN_TAU: f64 = 0.02;
const LBFGS_MEMORY: usize = 7;
const LBFGS_ITERS: u64 = 200;
const ASCENT_ITERS: usize = 300;

fn to_float(m: &Matrix<Q>) -> CM {
    CM::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_c64())
}

fn to_exact(x: &CM) -> Option<Matrix<Q>> {
    let mut out = Matrix::zeros(x.nrows(), x.ncols());
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            out.set(i, j, Q::from_c64(x[(i, j)])?);
        }
    }
    Some(out)
}

fn scaled(m: &CM, s: f64) -> CM {
    m.map(|z| z * s)
}

#[derive(Clone)]
struct Coeffs {
    a: CM,
    b: CM,
    c: CM,
    d: CM,
    m: CM,
}

impl Coeffs {
    fn of(p: &QmvfProblem<Q>) -> Self {
        Coeffs {
            a: to_float(&p.a),
            b: to_float(&p.b),
            c: to_float(&p.c),
            d: to_float(p.d.matrix()),
            m: to_float(p.m.matrix()),
        }
    }

    /// `AXB + C` and `φ(X)`.
    fn phi(&self, x: &CM) -> (CM, CM) {
        let y = &self.a * x * &self.b + &self.c;
        let phi = &y * &self.m * y.adjoint() + &self.d;
        (y, phi)
    }

    /// `A*·P·(AXB + C)·M·B*`: the conjugate gradient of `trace(P·φ)` for a
    /// fixed Hermitian `P`.
    fn pullback(&self, p: &CM, y: &CM) -> CM {
        self.a.adjoint() * p * y * &self.m * self.b.adjoint()
    }
}

/// Eigenvalues in descending order with matching eigenvector columns.
fn descending(h: CM) -> (Vec<f64>, CM) {
    let e = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..e.eigenvalues.len()).collect();
    idx.sort_by(|&p, &q| e.eigenvalues[q].total_cmp(&e.eigenvalues[p]));
    let vals = idx.iter().map(|&k| e.eigenvalues[k]).collect();
    let vecs = CM::from_fn(e.eigenvectors.nrows(), idx.len(), |i, j| e.eigenvectors[(i, idx[j])]);
    (vals, vecs)
}

/// Soft minimum of the `j+1` largest eigenvalues of `σφ/s`, `s = 1 + ‖φ‖`,
/// over the real coordinates `[Re vec X, Im vec X]` (row-major).
struct SoftMin {
    k: Coeffs,
    sigma: f64,
    j: usize,
    shape: (usize, usize),
}

fn pack(x: &CM) -> Vec<f64> {
    let t = x.transpose();
    t.iter().map(|z| z.re).chain(t.iter().map(|z| z.im)).collect()
}

fn unpack(v: &[f64], (p, m): (usize, usize)) -> CM {
    CM::from_fn(p, m, |i, j| Complex64::new(v[i * m + j], v[p * m + i * m + j]))
}

impl SoftMin {
    fn eval(&self, v: &[f64]) -> (f64, CM) {
        let x = unpack(v, self.shape);
        let (y, phi) = self.k.phi(&x);
        let phi = scaled(&phi, self.sigma);
        let fro = phi.norm();
        let s = 1.0 + fro;
        let (vals, vecs) = descending(phi.clone());
        let l: Vec<f64> = vals[..=self.j].iter().map(|v| v / s).collect();
        let lmin = l.iter().copied().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = l.iter().map(|li| (-(li - lmin) / SOFTMIN_TAU).exp()).collect();
        let tot: f64 = w.iter().sum();
        let f = lmin - SOFTMIN_TAU * tot.ln();
        let n = phi.nrows();
        let mut weight = CM::zeros(n, n);
        let mut mean = 0.0;
        for t in 0..=self.j {
            let u = vecs.column(t);
            weight += u * u.adjoint() * Complex64::new(w[t] / tot / s, 0.0);
            mean += w[t] / tot * l[t];
        }
        // derivative of the 1/s normalization
        if fro > 0.0 {
            weight -= scaled(&phi, mean / s / fro);
        }
        (f, scaled(&self.k.pullback(&weight, &y), self.sigma))
    }
}

impl CostFunction for SoftMin {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, v: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        let f = -self.eval(v).0;
        Ok(if f.is_finite() { f } else { f64::MAX })
    }
}

impl Gradient for SoftMin {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, v: &Vec<f64>) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        let g = self.eval(v).1;
        Ok(pack(&g).into_iter().map(|t| -2.0 * t).collect())
    }
}

fn lbfgs(k: &Coeffs, sigma: f64, j: usize, x0: &CM) -> CM {
    let shape = x0.shape();
    let cost = SoftMin {
        k: k.clone(),
        sigma,
        j,
        shape,
    };
    let start = pack(x0);
    let solver = LBFGS::new(MoreThuenteLineSearch::new(), LBFGS_MEMORY);
    match Executor::new(cost, solver)
        .configure(|st| st.param(start.clone()).max_iters(LBFGS_ITERS))
        .run()
    {
        Ok(res) => unpack(res.state().best_param.as_ref().unwrap_or(&start), shape),
        Err(_) => x0.clone(),
    }
}

/// `λ_j(σφ)` and its ascent direction; for the smallest eigenvalue with
/// `soft`, a soft minimum over all eigenvalues instead.
fn eigen_objective(k: &Coeffs, x: &CM, sigma: f64, j: usize, soft: bool) -> (f64, CM) {
    let (y, phi) = k.phi(x);
    let (vals, vecs) = descending(scaled(&phi, sigma));
    let n = vals.len();
    if soft && j + 1 == n && n > 1 {
        let lmin = vals[n - 1];
        let tau = SOFTMIN_TAU * (1.0 + vals.iter().map(|v| v * v).sum::<f64>().sqrt());
        let w: Vec<f64> = vals.iter().map(|v| (-(v - lmin) / tau).exp()).collect();
        let tot: f64 = w.iter().sum();
        let mut weight = CM::zeros(n, n);
        for (t, wt) in w.iter().enumerate() {
            let u = vecs.column(t);
            weight += u * u.adjoint() * Complex64::new(wt / tot, 0.0);
        }
        return (lmin - tau * tot.ln(), scaled(&k.pullback(&weight, &y), sigma));
    }
    let u = vecs.column(j).into_owned();
    let proj = &u * u.adjoint();
    (vals[j], scaled(&k.pullback(&proj, &y), sigma))
}

/// Steepest ascent on the unnormalized eigenvalue, stopping once it is
/// clearly positive.
fn ascend(k: &Coeffs, sigma: f64, j: usize, x0: &CM, soft: bool) -> CM {
    let mut x = x0.clone();
    let (mut f, mut g) = eigen_objective(k, &x, sigma, j, soft);
    let mut step = 1.0;
    for _ in 0..ASCENT_ITERS {
        if f > 1e-6 * (1.0 + k.phi(&x).1.norm()) {
            break;
        }
        let gn = g.norm();
        if !gn.is_finite() || gn < 1e-14 {
            break;
        }
        let cand = &x + scaled(&g, step / gn);
        let (f2, g2) = eigen_objective(k, &cand, sigma, j, soft);
        if f2 > f {
            (x, f, g) = (cand, f2, g2);
            step *= 1.5;
        } else {
            step *= 0.5;
            if step < 1e-10 {
                break;
            }
        }
    }
    x
}

/// Eigenvectors of `BMB*` for positive (or negative) eigenvalues, rounded
/// exactly from floats, as columns.
fn sign_space(p: &QmvfProblem<Q>, positive: bool) -> Matrix<Q> {
    let w = to_float(p.bmb().matrix());
    let (vals, vecs) = descending(w);
    let top = vals.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    let keep: Vec<usize> = (0..vals.len())
        .filter(|&k| if positive { vals[k] > 1e-9 * top } else { vals[k] < -1e-9 * top })
        .collect();
    let u = CM::from_fn(vecs.nrows(), keep.len(), |i, j| vecs[(i, keep[j])]);
    to_exact(&u).unwrap_or_else(|| Matrix::zeros(vecs.nrows(), 0))
}

/// `0`, `−A†CB†` and `−A†·CMB*·(BMB*)†`.
fn centres(p: &QmvfProblem<Q>) -> Vec<Matrix<Q>> {
    let d = p.dims();
    let ap = p.a.pinv();
    vec![
        Matrix::zeros(d.p, d.m),
        -&product(&[&ap, &p.c, &p.b.pinv()]),
        -&product(&[&ap, &p.cmb(), &p.bmb().matrix().pinv()]),
    ]
}

/// Candidate witnesses in a fixed order. `stream(k)` supplies the generator
/// for the `k`-th independent piece of work.
pub(crate) fn candidates<F>(p: &QmvfProblem<Q>, stream: F) -> Vec<Matrix<Q>>
where
    F: Fn(u64) -> ChaCha8Rng + Sync,
{
    let d = p.dims();
    if d.p * d.m == 0 {
        return Vec::new();
    }
    let cs = centres(p);
    let spaces = [sign_space(p, true), sign_space(p, false)];
    let mut rng = stream(0);
    let mut out = cs.clone();
    for c in &cs {
        for u in spaces.iter().filter(|u| u.cols() > 0) {
            for s in [1, 8, 64, 1024] {
                let g: Matrix<Q> = random::matrix(&mut rng, d.p, u.cols(), 9);
                out.push(c + &(&g * &u.conj_transpose()).scale(&Q::from_parts(s, 0)));
            }
        }
        for s in [1, 1, 4, 4, 16, 16, 64, 64, 1024, 1024] {
            let e: Matrix<Q> = random::matrix(&mut rng, d.p, d.m, 9);
            out.push(c + &e.scale(&Q::from_ratio(1, s)));
        }
    }

    let k = Coeffs::of(p);
    let tasks: Vec<(usize, usize)> = (0..2).flat_map(|s| (0..d.n).map(move |j| (s, j))).collect();
    let local: Vec<Vec<Matrix<Q>>> = tasks
        .par_iter()
        .enumerate()
        .map(|(t, &(s, j))| {
            let mut rng = stream(1 + t as u64);
            let sigma = if s == 0 { 1.0 } else { -1.0 };
            let u = &spaces[s];
            let mut found = Vec::new();
            for st in 0..10 {
                let x0 = if st < 3 {
                    to_float(&cs[st])
                } else if st < 6 || u.cols() == 0 {
                    to_float(&random::matrix::<Q, _>(&mut rng, d.p, d.m, 3))
                } else {
                    let g: Matrix<Q> = random::matrix(&mut rng, d.p, u.cols(), 3);
                    let dir = to_float(&(&g * &u.conj_transpose()));
                    to_float(&cs[st % 3]) + scaled(&dir, if st % 2 == 0 { 1.0 } else { 10.0 })
                };
                found.extend(to_exact(&lbfgs(&k, sigma, j, &x0)));
                found.extend(to_exact(&ascend(&k, sigma, j, &x0, st % 2 == 0)));
            }
            found
        })
        .collect();
    out.extend(local.into_iter().flatten());
    out
}
