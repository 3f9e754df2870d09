//! Hermitian and general dense eigensolvers.
//!
//! The Hermitian path reduces to a real symmetric tridiagonal form with
//! complex Householder reflections and runs an implicit-shift QL iteration,
//! accumulating the transformations so the eigenvectors come out orthonormal.
//! The general path reduces to Hessenberg form and applies a single-shift QR
//! iteration with complex Givens rotations, recovering eigenvectors of the
//! resulting triangular factor by back-substitution.

use super::{ComplexMatrix, NumError, C64};

/// Relative tolerance below which an input counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_QL_SWEEPS: usize = 64;

/// Eigendecomposition with complex eigenvalues in ascending order of real
/// part (ties broken by imaginary part) and eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: ComplexMatrix,
}

/// Eigendecomposition of a Hermitian matrix: exactly real eigenvalues in
/// ascending order, orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl From<HermitianEigen> for EigenDecomposition {
    fn from(h: HermitianEigen) -> Self {
        EigenDecomposition {
            eigenvalues: h.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect(),
            eigenvectors: h.eigenvectors,
        }
    }
}

impl ComplexMatrix {
    /// Eigendecomposition of a Hermitian matrix.  The input must satisfy
    /// ‖A − A†‖_F ≤ 1e-10 ‖A‖_F.
    pub fn eig_hermitian(&self) -> Result<HermitianEigen, NumError> {
        if !self.is_square() {
            return Err(NumError::NotSquare(self.rows(), self.cols()));
        }
        if !self.all_finite() {
            return Err(NumError::NonFinite);
        }
        let dev = self.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(NumError::NotHermitian { deviation: dev });
        }
        let a = self.hermitize();

        if a.is_diagonal() {
            return Ok(sorted_diagonal(&a));
        }

        let (mut d, mut e, mut q) = hermitian_tridiagonalize(&a);
        tql_implicit(&mut d, &mut e, &mut q)?;
        sort_real_pairs(&mut d, &mut q);
        Ok(HermitianEigen {
            eigenvalues: d,
            eigenvectors: q,
        })
    }

    /// Eigendecomposition of a general square matrix; eigenvalues ascending
    /// by real part, ties broken by imaginary part.
    pub fn eig_general(&self) -> Result<EigenDecomposition, NumError> {
        if !self.is_square() {
            return Err(NumError::NotSquare(self.rows(), self.cols()));
        }
        if !self.all_finite() {
            return Err(NumError::NonFinite);
        }
        let n = self.rows();
        if n == 1 {
            return Ok(EigenDecomposition {
                eigenvalues: vec![self[(0, 0)]],
                eigenvectors: ComplexMatrix::identity(1),
            });
        }
        let (h, u) = hessenberg(self);
        let (t, z) = schur_qr(h, u)?;
        let y = triangular_eigenvectors(&t);
        let mut vectors = z.matmul(&y)?;
        normalize_columns(&mut vectors);
        let mut eigenvalues: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
        sort_complex_pairs(&mut eigenvalues, &mut vectors);
        Ok(EigenDecomposition {
            eigenvalues,
            eigenvectors: vectors,
        })
    }

    /// Applies `f` to the spectrum of a Hermitian matrix: V f(Λ) V†.
    pub fn hermitian_spectral_map(
        &self,
        f: impl Fn(f64) -> f64,
    ) -> Result<ComplexMatrix, NumError> {
        if self.is_diagonal() {
            let diag: Vec<C64> = self
                .diagonal()
                .iter()
                .map(|v| C64::new(f(v.re), 0.0))
                .collect();
            return Ok(ComplexMatrix::from_diag(&diag));
        }
        let eig = self.eig_hermitian()?;
        let n = self.rows();
        // V diag(f) then times V†
        let mut scaled = eig.eigenvectors.clone();
        for j in 0..n {
            let fj = C64::new(f(eig.eigenvalues[j]), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        scaled.matmul(&eig.eigenvectors.adjoint())
    }
}

fn sorted_diagonal(a: &ComplexMatrix) -> HermitianEigen {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = a.diagonal().iter().map(|v| v.re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, &i) in order.iter().enumerate() {
        vectors[(i, col)] = C64::new(1.0, 0.0);
        values.push(diag[i]);
    }
    HermitianEigen {
        eigenvalues: values,
        eigenvectors: vectors,
    }
}

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form.  Returns (diagonal, subdiagonal, Q) with A = Q T Q† and the
/// subdiagonal entry `e[i]` coupling i and i+1 (`e[n-1]` unused, zero).
fn hermitian_tridiagonalize(a: &ComplexMatrix) -> (Vec<f64>, Vec<f64>, ComplexMatrix) {
    let n = a.rows();
    let mut m = a.clone();
    let mut q = ComplexMatrix::identity(n);
    let mut v = vec![C64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += m[(i, k)].norm_sqr();
        }
        let beta = norm2.sqrt();
        if beta == 0.0 {
            continue;
        }
        let x0 = m[(k + 1, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };

        // v = x + phase * beta * e1, normalized; H = I - 2 v v†
        for i in k + 1..n {
            v[i] = m[(i, k)];
        }
        v[k + 1] += phase * beta;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let inv = 1.0 / vnorm2.sqrt();
        for i in k + 1..n {
            v[i] *= inv;
        }

        // column k and row k transform to a single subdiagonal entry
        let new_sub = -(phase * beta);
        m[(k + 1, k)] = new_sub;
        m[(k, k + 1)] = new_sub.conj();
        for i in k + 2..n {
            m[(i, k)] = C64::new(0.0, 0.0);
            m[(k, i)] = C64::new(0.0, 0.0);
        }

        // trailing block B <- B - 2(v w† + w v†), w = u - (v†u) v, u = B v
        let mut u = vec![C64::new(0.0, 0.0); n];
        for i in k + 1..n {
            let mut s = C64::new(0.0, 0.0);
            for j in k + 1..n {
                s += m[(i, j)] * v[j];
            }
            u[i] = s;
        }
        let kappa: C64 = (k + 1..n).map(|i| v[i].conj() * u[i]).sum();
        for i in k + 1..n {
            u[i] -= kappa * v[i]; // now u holds w
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let upd = v[i] * u[j].conj() + u[i] * v[j].conj();
                m[(i, j)] -= upd * 2.0;
            }
        }

        // Q <- Q H = Q - 2 (Q v) v†
        for r in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for i in k + 1..n {
                s += q[(r, i)] * v[i];
            }
            for i in k + 1..n {
                q[(r, i)] -= s * v[i].conj() * 2.0;
            }
        }
    }

    // make the complex subdiagonal real by a diagonal phase similarity
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut dk = C64::new(1.0, 0.0);
    for i in 0..n {
        d[i] = m[(i, i)].re;
        // scale column i of Q by the accumulated phase
        for r in 0..n {
            q[(r, i)] *= dk;
        }
        if i + 1 < n {
            let f = m[(i + 1, i)];
            let mag = f.norm();
            e[i] = mag;
            dk = if mag > 0.0 { f * dk / mag } else { dk };
        }
    }
    (d, e, q)
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix with
/// accumulation of the rotations into the complex column basis `z`.
fn tql_implicit(d: &mut [f64], e: &mut [f64], z: &mut ComplexMatrix) -> Result<(), NumError> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let nrows = z.rows();

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(NumError::ConvergenceFailure { iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0_f64, 1.0_f64, 0.0_f64);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..nrows {
                    let zk1 = z[(k, i + 1)];
                    let zk0 = z[(k, i)];
                    z[(k, i + 1)] = zk0 * s + zk1 * c;
                    z[(k, i)] = zk0 * c - zk1 * s;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn sort_real_pairs(d: &mut Vec<f64>, q: &mut ComplexMatrix) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let sorted_d: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut sorted_q = ComplexMatrix::zeros(q.rows(), n);
    for (col, &i) in order.iter().enumerate() {
        for r in 0..q.rows() {
            sorted_q[(r, col)] = q[(r, i)];
        }
    }
    *d = sorted_d;
    *q = sorted_q;
}

fn sort_complex_pairs(vals: &mut Vec<C64>, vecs: &mut ComplexMatrix) {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        (vals[i].re, vals[i].im)
            .partial_cmp(&(vals[j].re, vals[j].im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sorted: Vec<C64> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_v = ComplexMatrix::zeros(vecs.rows(), n);
    for (col, &i) in order.iter().enumerate() {
        for r in 0..vecs.rows() {
            sorted_v[(r, col)] = vecs[(r, i)];
        }
    }
    *vals = sorted;
    *vecs = sorted_v;
}

/// Householder reduction to upper Hessenberg form, accumulating the unitary
/// transform: A = U H U†.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut u = ComplexMatrix::identity(n);
    let mut v = vec![C64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += h[(i, k)].norm_sqr();
        }
        let beta = norm2.sqrt();
        if beta == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] += phase * beta;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let inv = 1.0 / vnorm2.sqrt();
        for i in k + 1..n {
            v[i] *= inv;
        }

        // left: rows k+1..n over all columns
        for j in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for i in k + 1..n {
                s += v[i].conj() * h[(i, j)];
            }
            for i in k + 1..n {
                h[(i, j)] -= v[i] * s * 2.0;
            }
        }
        // right: columns k+1..n over all rows
        for i in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for j in k + 1..n {
                s += h[(i, j)] * v[j];
            }
            for j in k + 1..n {
                h[(i, j)] -= s * v[j].conj() * 2.0;
            }
        }
        // accumulate U <- U H_k
        for r in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for i in k + 1..n {
                s += u[(r, i)] * v[i];
            }
            for i in k + 1..n {
                u[(r, i)] -= s * v[i].conj() * 2.0;
            }
        }
        // enforce the exact Hessenberg zero pattern in column k
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, u)
}

/// Complex Givens rotation with real cosine: [c s; -s̄ c]·[f; g] = [r; 0].
fn zrotg(f: C64, g: C64) -> (f64, C64) {
    let fn2 = f.norm();
    let gn2 = g.norm();
    if gn2 == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if fn2 == 0.0 {
        return (0.0, g.conj() / gn2);
    }
    let r = (fn2 * fn2 + gn2 * gn2).sqrt();
    let c = fn2 / r;
    let s = (f / fn2) * g.conj() / r;
    (c, s)
}

/// Single-shift QR iteration on an upper Hessenberg matrix; returns the
/// triangular Schur factor T and the accumulated unitary Z with
/// A = Z T Z†.
fn schur_qr(
    mut h: ComplexMatrix,
    mut z: ComplexMatrix,
) -> Result<(ComplexMatrix, ComplexMatrix), NumError> {
    let n = h.rows();
    let mut hi = n - 1;
    let mut total_iter = 0usize;
    let max_iter = 80 * n.max(4);
    let mut since_deflation = 0usize;

    while hi > 0 {
        // zero out negligible subdiagonals in the active window
        for k in 1..=hi {
            let scale = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
            if h[(k, k - 1)].norm() <= f64::EPSILON * scale {
                h[(k, k - 1)] = C64::new(0.0, 0.0);
            }
        }
        if h[(hi, hi - 1)].norm() == 0.0 {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }

        total_iter += 1;
        since_deflation += 1;
        if total_iter > max_iter {
            return Err(NumError::ConvergenceFailure {
                iterations: total_iter,
            });
        }

        // Wilkinson shift from the trailing 2x2 block, with an occasional
        // exceptional shift to break symmetry stalls.
        let mu = if since_deflation.is_multiple_of(13) {
            h[(hi, hi)] + C64::new(1.5 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };

        // explicit shifted QR step on the block lo..=hi
        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        let mut rot: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s) = zrotg(h[(i, i)], h[(i + 1, i)]);
            for j in i..n {
                let a = h[(i, j)];
                let b = h[(i + 1, j)];
                h[(i, j)] = a * c + b * s;
                h[(i + 1, j)] = -(a * s.conj()) + b * c;
            }
            h[(i + 1, i)] = C64::new(0.0, 0.0);
            rot.push((c, s));
        }
        for (offset, (c, s)) in rot.iter().enumerate() {
            let i = lo + offset;
            let top = (i + 1).min(hi);
            for k in 0..=top {
                let a = h[(k, i)];
                let b = h[(k, i + 1)];
                h[(k, i)] = a * *c + b * s.conj();
                h[(k, i + 1)] = -(a * *s) + b * *c;
            }
            for k in 0..n {
                let a = z[(k, i)];
                let b = z[(k, i + 1)];
                z[(k, i)] = a * *c + b * s.conj();
                z[(k, i + 1)] = -(a * *s) + b * *c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }
    // clean the strictly lower part so T is exactly triangular
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok((h, z))
}

fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> C64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvectors of an upper triangular matrix by back-substitution; column k
/// is the eigenvector for T[k,k].
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let mut y = ComplexMatrix::zeros(n, n);
    let smallnum = f64::EPSILON * t.fro_norm().max(1.0);
    for k in 0..n {
        let lam = t[(k, k)];
        y[(k, k)] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut sum = C64::new(0.0, 0.0);
            for j in i + 1..=k {
                sum += t[(i, j)] * y[(j, k)];
            }
            let mut den = t[(i, i)] - lam;
            if den.norm() < smallnum {
                den = C64::new(smallnum, 0.0);
            }
            y[(i, k)] = -sum / den;
            // guard against overflow for strongly non-normal blocks
            let mag = y[(i, k)].norm();
            if mag > 1e120 {
                let inv = 1.0 / mag;
                for j in i..=k {
                    y[(j, k)] *= inv;
                }
            }
        }
    }
    y
}

fn normalize_columns(v: &mut ComplexMatrix) {
    let n = v.cols();
    for j in 0..n {
        let norm: f64 = (0..v.rows())
            .map(|i| v[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            for i in 0..v.rows() {
                v[(i, j)] *= inv;
            }
        }
    }
}
