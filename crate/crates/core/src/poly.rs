//! Complex polynomial and 2×2 matrix-polynomial arithmetic.
//!
//! Products above a small size go through zero-padded FFTs; the balanced
//! product tree built on top of that is what keeps the fast pipeline at
//! `O(N log² N)`.

use std::cell::RefCell;
use std::ops::Add;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{NftError, Result};
use crate::par;

/// Result length above which products switch from schoolbook to FFT.
pub const FFT_THRESHOLD: usize = 64;

/// Below this many factors the tree product stops forking.
const TREE_FORK_MIN: usize = 8;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    static SCRATCH: RefCell<Vec<Complex64>> = const { RefCell::new(Vec::new()) };
}

fn transform(buf: &mut [Complex64], direction: FftDirection) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft(buf.len(), direction));
    SCRATCH.with(|s| {
        let mut s = s.borrow_mut();
        let need = plan.get_inplace_scratch_len();
        if s.len() < need {
            s.resize(need, Complex64::new(0.0, 0.0));
        }
        plan.process_with_scratch(buf, &mut s[..need]);
    });
}

/// Discrete Fourier transform of a power-of-two length vector.
///
/// Forward: `X_k = Σ_j x_j exp(-2πi jk/L)`. Inverse uses the opposite sign
/// and is scaled by `1/L`, so it undoes the forward transform.
pub fn fft(values: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
    let n = values.len();
    if !n.is_power_of_two() {
        return Err(NftError::NotPowerOfTwo(n));
    }
    let mut buf = values.to_vec();
    if inverse {
        transform(&mut buf, FftDirection::Inverse);
        let s = 1.0 / n as f64;
        buf.iter_mut().for_each(|v| *v *= s);
    } else {
        transform(&mut buf, FftDirection::Forward);
    }
    Ok(buf)
}

/// Dense polynomial `Σ_j coeffs[j] x^j`. Trailing zeros are kept, so the
/// degree is purely positional.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    /// Panics on an empty coefficient vector.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        ComplexPoly { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        ComplexPoly { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn zeros(degree: usize) -> Self {
        ComplexPoly { coeffs: vec![Complex64::new(0.0, 0.0); degree + 1] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = Self::zeros(k);
        p.coeffs[k] = Complex64::new(1.0, 0.0);
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    /// Zero-pad to `degree` (no-op if already that long).
    fn padded(&self, degree: usize) -> Vec<Complex64> {
        let mut v = self.coeffs.clone();
        v.resize(degree.max(self.degree()) + 1, Complex64::new(0.0, 0.0));
        v
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let d = self.degree().max(rhs.degree());
        let mut out = self.padded(d);
        for (o, c) in out.iter_mut().zip(&rhs.coeffs) {
            *o += c;
        }
        ComplexPoly { coeffs: out }
    }
}

/// Schoolbook convolution.
pub fn convolve_direct(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn spectrum_of(coeffs: &[Complex64], len: usize) -> Vec<Complex64> {
    // one spare slot for the repaired wrap coefficient
    let mut buf = Vec::with_capacity(len + 1);
    buf.extend_from_slice(coeffs);
    buf.resize(len, Complex64::new(0.0, 0.0));
    transform(&mut buf, FftDirection::Forward);
    buf
}

fn from_spectrum(mut buf: Vec<Complex64>, out_len: usize) -> Vec<Complex64> {
    transform(&mut buf, FftDirection::Inverse);
    let s = 1.0 / buf.len() as f64;
    buf.truncate(out_len);
    buf.iter_mut().for_each(|v| *v *= s);
    buf
}

/// FFT length for a product of `out_len` coefficients from inputs of at most
/// `max_in` coefficients. When `out_len - 1` is a power of two the cyclic
/// product is taken at that length and the single wrapped coefficient is
/// repaired afterwards, which halves the transform size.
fn product_len(out_len: usize, max_in: usize) -> (usize, bool) {
    let l = out_len - 1;
    if l.is_power_of_two() && max_in <= l && l > 1 {
        (l, true)
    } else {
        (out_len.next_power_of_two(), false)
    }
}

/// Inverse transform and undo the wrap of the top coefficient `top`.
fn finish(buf: Vec<Complex64>, out_len: usize, wrapped: Option<Complex64>) -> Vec<Complex64> {
    let mut c = from_spectrum(buf, out_len);
    if let Some(top) = wrapped {
        c[0] -= top;
        c.push(top);
    }
    c
}

/// Convolution through a zero-padded FFT.
pub fn convolve_fft(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let out_len = a.len() + b.len() - 1;
    let (l, wrap) = product_len(out_len, a.len().max(b.len()));
    let fa = spectrum_of(a, l);
    let fb = spectrum_of(b, l);
    let prod = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
    finish(prod, out_len, wrap.then(|| a[a.len() - 1] * b[b.len() - 1]))
}

/// Exact product of two polynomials; degree is `deg p + deg q`.
pub fn poly_mul(p: &ComplexPoly, q: &ComplexPoly) -> ComplexPoly {
    let out_len = p.coeffs.len() + q.coeffs.len() - 1;
    let coeffs = if out_len <= FFT_THRESHOLD {
        convolve_direct(&p.coeffs, &q.coeffs)
    } else {
        convolve_fft(&p.coeffs, &q.coeffs)
    };
    ComplexPoly { coeffs }
}

/// 2×2 matrix whose entries are polynomials of a common degree.
#[derive(Debug, Clone, PartialEq)]
pub struct MatPoly2 {
    pub e11: ComplexPoly,
    pub e12: ComplexPoly,
    pub e21: ComplexPoly,
    pub e22: ComplexPoly,
}

impl MatPoly2 {
    /// Entries are zero-padded to a common degree.
    pub fn new(e11: ComplexPoly, e12: ComplexPoly, e21: ComplexPoly, e22: ComplexPoly) -> Self {
        let d = e11.degree().max(e12.degree()).max(e21.degree()).max(e22.degree());
        MatPoly2 {
            e11: ComplexPoly { coeffs: e11.padded(d) },
            e12: ComplexPoly { coeffs: e12.padded(d) },
            e21: ComplexPoly { coeffs: e21.padded(d) },
            e22: ComplexPoly { coeffs: e22.padded(d) },
        }
    }

    pub fn identity() -> Self {
        let z = ComplexPoly::zeros(0);
        MatPoly2::new(ComplexPoly::one(), z.clone(), z, ComplexPoly::one())
    }

    pub fn degree(&self) -> usize {
        self.e11.degree()
    }

    pub fn entries(&self) -> [&ComplexPoly; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        MatPoly2 {
            e11: self.e11.scale(s),
            e12: self.e12.scale(s),
            e21: self.e21.scale(s),
            e22: self.e22.scale(s),
        }
    }

    /// Evaluate every entry at `x`, as `[[e11, e12], [e21, e22]]`.
    pub fn eval(&self, x: Complex64) -> [[Complex64; 2]; 2] {
        [[self.e11.eval(x), self.e12.eval(x)], [self.e21.eval(x), self.e22.eval(x)]]
    }
}

/// Matrix product `A·B`; the degree bound is `deg A + deg B`.
///
/// On the FFT path each of the eight input entries is transformed once and
/// the four output entries are combined in the frequency domain.
pub fn matpoly_mul(a: &MatPoly2, b: &MatPoly2) -> MatPoly2 {
    mul_node(&Node::plain(a.clone()), &Node::plain(b.clone())).m
}

/// Cyclic length-`deg` spectra of the four entries; valid only when the
/// degree is a power of two, where the entries reduced mod `x^deg - 1` are
/// exactly what the spectra describe.
type Spectra = [Vec<Complex64>; 4];

/// Tree node: a partial product plus the spectra left over from forming it.
#[derive(Clone)]
struct Node {
    m: MatPoly2,
    spec: Option<Spectra>,
}

impl Node {
    fn plain(m: MatPoly2) -> Self {
        Node { m, spec: None }
    }

    /// Length-`l` spectra of the entries. When cached spectra of half that
    /// length exist they supply the even bins, and only the odd bins need a
    /// half-length transform.
    fn spectra(&self, l: usize) -> Spectra {
        let entries = self.m.entries();
        match &self.spec {
            Some(half) if 2 * half[0].len() == l => {
                let w = twiddles(l);
                [0, 1, 2, 3].map(|i| lift(entries[i].coeffs(), &half[i], &w))
            }
            _ => entries.map(|p| spectrum_of(&p.coeffs, l)),
        }
    }
}

thread_local! {
    static TWIDDLES: RefCell<Vec<std::rc::Rc<Vec<Complex64>>>> = const { RefCell::new(Vec::new()) };
}

/// `exp(-2πi j / l)` for `j < l/2`, cached per power of two.
fn twiddles(l: usize) -> std::rc::Rc<Vec<Complex64>> {
    let k = l.trailing_zeros() as usize;
    TWIDDLES.with(|t| {
        let mut t = t.borrow_mut();
        if t.len() <= k {
            t.resize(k + 1, std::rc::Rc::new(Vec::new()));
        }
        if t[k].is_empty() {
            let step = -2.0 * std::f64::consts::PI / l as f64;
            t[k] = std::rc::Rc::new((0..l / 2).map(|j| Complex64::from_polar(1.0, step * j as f64)).collect());
        }
        t[k].clone()
    })
}

/// Length-`2l'` spectrum of a polynomial of degree `l'` from its cyclic
/// length-`l'` spectrum: odd bins are the length-`l'` spectrum of the
/// coefficients twisted by `w^j`, with the top coefficient folded back
/// (`w^{l'} = -1`).
fn lift(coeffs: &[Complex64], half: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
    let lh = half.len();
    let mut odd: Vec<Complex64> = coeffs[..lh].iter().zip(w).map(|(c, w)| c * w).collect();
    if let Some(top) = coeffs.get(lh) {
        odd[0] -= top;
    }
    transform(&mut odd, FftDirection::Forward);
    let mut out = Vec::with_capacity(2 * lh + 1);
    for (e, o) in half.iter().zip(&odd) {
        out.push(*e);
        out.push(*o);
    }
    out
}

fn mul_node(a: &Node, b: &Node) -> Node {
    let (a_m, b_m) = (&a.m, &b.m);
    let out_len = a_m.degree() + b_m.degree() + 1;
    if out_len <= FFT_THRESHOLD {
        let entry = |x: &ComplexPoly, y: &ComplexPoly, u: &ComplexPoly, v: &ComplexPoly| {
            let mut s = convolve_direct(&x.coeffs, &y.coeffs);
            for (o, t) in s.iter_mut().zip(convolve_direct(&u.coeffs, &v.coeffs)) {
                *o += t;
            }
            ComplexPoly { coeffs: s }
        };
        return Node::plain(MatPoly2 {
            e11: entry(&a_m.e11, &b_m.e11, &a_m.e12, &b_m.e21),
            e12: entry(&a_m.e11, &b_m.e12, &a_m.e12, &b_m.e22),
            e21: entry(&a_m.e21, &b_m.e11, &a_m.e22, &b_m.e21),
            e22: entry(&a_m.e21, &b_m.e12, &a_m.e22, &b_m.e22),
        });
    }
    let (l, wrap) = product_len(out_len, a_m.degree().max(b_m.degree()) + 1);
    let top = |p: &ComplexPoly| p.coeffs[p.coeffs.len() - 1];
    let wrapped = |x: &ComplexPoly, y: &ComplexPoly, u: &ComplexPoly, v: &ComplexPoly| {
        wrap.then(|| top(x) * top(y) + top(u) * top(v))
    };
    let t = [
        wrapped(&a_m.e11, &b_m.e11, &a_m.e12, &b_m.e21),
        wrapped(&a_m.e11, &b_m.e12, &a_m.e12, &b_m.e22),
        wrapped(&a_m.e21, &b_m.e11, &a_m.e22, &b_m.e21),
        wrapped(&a_m.e21, &b_m.e12, &a_m.e22, &b_m.e22),
    ];
    let [mut a11, mut a12, mut a21, mut a22] = a.spectra(l);
    let [b11, b12, b21, b22] = b.spectra(l);
    // the row spectra of A are overwritten by the row spectra of A·B
    for k in 0..l {
        let (x11, x12) = (a11[k], a12[k]);
        a11[k] = x11 * b11[k] + x12 * b21[k];
        a12[k] = x11 * b12[k] + x12 * b22[k];
        let (x21, x22) = (a21[k], a22[k]);
        a21[k] = x21 * b11[k] + x22 * b21[k];
        a22[k] = x21 * b12[k] + x22 * b22[k];
    }
    let spec = wrap.then(|| [a11.clone(), a12.clone(), a21.clone(), a22.clone()]);
    Node {
        m: MatPoly2 {
            e11: ComplexPoly { coeffs: finish(a11, out_len, t[0]) },
            e12: ComplexPoly { coeffs: finish(a12, out_len, t[1]) },
            e21: ComplexPoly { coeffs: finish(a21, out_len, t[2]) },
            e22: ComplexPoly { coeffs: finish(a22, out_len, t[3]) },
        },
        spec,
    }
}

/// Ordered product with later factors on the left, split at fixed midpoints.
fn ordered_tree<T, F>(items: &[T], mul: &F) -> T
where
    T: Clone + Send + Sync,
    F: Fn(&T, &T) -> T + Sync,
{
    match items.len() {
        1 => items[0].clone(),
        2 => mul(&items[1], &items[0]),
        n => {
            let (early, late) = items.split_at(n / 2);
            let (e, l) = if n >= TREE_FORK_MIN {
                par::join(|| ordered_tree(early, mul), || ordered_tree(late, mul))
            } else {
                (ordered_tree(early, mul), ordered_tree(late, mul))
            };
            mul(&l, &e)
        }
    }
}

/// `factors[K-1] · … · factors[1] · factors[0]` by balanced pairing.
///
/// The split points depend only on the length, so serial and parallel
/// execution give bitwise-identical results.
pub fn tree_product(factors: &[MatPoly2]) -> Result<MatPoly2> {
    if factors.is_empty() {
        return Err(NftError::EmptyProduct);
    }
    let nodes: Vec<Node> = factors.iter().cloned().map(Node::plain).collect();
    Ok(ordered_tree(&nodes, &mul_node).m)
}

/// Product of scalar polynomials with the same pairing as [`tree_product`].
pub fn poly_tree_product(factors: &[ComplexPoly]) -> Result<ComplexPoly> {
    if factors.is_empty() {
        return Err(NftError::EmptyProduct);
    }
    Ok(ordered_tree(factors, &poly_mul))
}

/// `p(w_j)` at `w_j = exp(2πi j / nprime)`, `j = 0..nprime`.
pub fn eval_roots_of_unity(p: &ComplexPoly, nprime: usize) -> Result<Vec<Complex64>> {
    if !nprime.is_power_of_two() {
        return Err(NftError::NotPowerOfTwo(nprime));
    }
    if nprime < p.coeffs.len() {
        return Err(NftError::TooFewNodes { nodes: nprime, degree: p.degree() });
    }
    let mut buf = p.coeffs.clone();
    buf.resize(nprime, Complex64::new(0.0, 0.0));
    transform(&mut buf, FftDirection::Inverse);
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> ComplexPoly {
        ComplexPoly::new(
            (0..=degree).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        )
    }

    fn random_mat(rng: &mut ChaCha8Rng, degree: usize) -> MatPoly2 {
        MatPoly2::new(
            random_poly(rng, degree),
            random_poly(rng, degree),
            random_poly(rng, degree),
            random_poly(rng, degree),
        )
    }

    // missing trailing coefficients count as zero
    fn max_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
        let zero = Complex64::new(0.0, 0.0);
        let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        (0..a.len().max(b.len()))
            .map(|j| (a.get(j).unwrap_or(&zero) - b.get(j).unwrap_or(&zero)).norm())
            .fold(0.0, f64::max)
            / scale
    }

    fn mat_rel(a: &MatPoly2, b: &MatPoly2) -> f64 {
        a.entries().iter().zip(b.entries()).map(|(x, y)| max_rel(x.coeffs(), y.coeffs())).fold(0.0, f64::max)
    }

    /// Entrywise schoolbook product, independent of `matpoly_mul`.
    fn brute_matmul(a: &MatPoly2, b: &MatPoly2) -> MatPoly2 {
        let ent = |x: &ComplexPoly, y: &ComplexPoly, u: &ComplexPoly, v: &ComplexPoly| {
            let mut out = vec![c(0.0, 0.0); x.degree() + y.degree() + 1];
            for i in 0..=x.degree() {
                for j in 0..=y.degree() {
                    out[i + j] += x.coeffs()[i] * y.coeffs()[j] + u.coeffs()[i] * v.coeffs()[j];
                }
            }
            ComplexPoly::new(out)
        };
        MatPoly2::new(
            ent(&a.e11, &b.e11, &a.e12, &b.e21),
            ent(&a.e11, &b.e12, &a.e12, &b.e22),
            ent(&a.e21, &b.e11, &a.e22, &b.e21),
            ent(&a.e21, &b.e12, &a.e22, &b.e22),
        )
    }

    #[test]
    fn wrapped_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (da, db) in [(64, 64), (100, 28), (127, 1), (1, 127), (200, 56)] {
            let p = random_poly(&mut rng, da);
            let q = random_poly(&mut rng, db);
            let want = convolve_direct(p.coeffs(), q.coeffs());
            assert!(max_rel(poly_mul(&p, &q).coeffs(), &want) < 1e-13, "{da} {db}");
        }
        let a = random_mat(&mut rng, 64);
        let b = random_mat(&mut rng, 64);
        let prod = matpoly_mul(&a, &b);
        assert_eq!(prod.degree(), 128);
        let x = c(0.3, -0.9);
        let (ea, eb, ep) = (a.eval(x), b.eval(x), prod.eval(x));
        for i in 0..2 {
            for j in 0..2 {
                let want = ea[i][0] * eb[0][j] + ea[i][1] * eb[1][j];
                assert!((ep[i][j] - want).norm() < 1e-12 * want.norm().max(1.0));
            }
        }
    }

    #[test]
    fn fft_delta_and_constant() {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        assert_eq!(fft(&[one, zero, zero, zero], false).unwrap(), vec![one; 4]);
        let f = fft(&[one; 4], false).unwrap();
        assert!(max_rel(&f, &[c(4.0, 0.0), zero, zero, zero]) < 1e-15);
        assert!(matches!(fft(&[one; 6], false), Err(NftError::NotPowerOfTwo(6))));
    }

    #[test]
    fn fft_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_poly(&mut rng, 7).into_coeffs();
        let back = fft(&fft(&x, false).unwrap(), true).unwrap();
        assert!(max_rel(&back, &x) < 1e-12);
    }

    #[test]
    fn fft_sign_convention() {
        let x: Vec<Complex64> = (0..8).map(|k| c(k as f64, 0.5 * k as f64)).collect();
        let f = fft(&x, false).unwrap();
        for (k, fk) in f.iter().enumerate() {
            let dft: Complex64 = x
                .iter()
                .enumerate()
                .map(|(j, xj)| xj * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / 8.0))
                .sum();
            assert!((fk - dft).norm() < 1e-12);
        }
    }

    #[test]
    fn small_products() {
        let p = ComplexPoly::new(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let q = ComplexPoly::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(poly_mul(&p, &q).coeffs(), &[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(poly_mul(&p, &ComplexPoly::one()), p);
    }

    #[test]
    fn fft_path_matches_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = random_poly(&mut rng, 20);
        let q = random_poly(&mut rng, 20);
        let direct = convolve_direct(p.coeffs(), q.coeffs());
        let viafft = convolve_fft(p.coeffs(), q.coeffs());
        assert!(max_rel(&viafft, &direct) < 1e-12);
        let big_p = random_poly(&mut rng, 80);
        let big_q = random_poly(&mut rng, 50);
        let m = poly_mul(&big_p, &big_q);
        assert_eq!(m.degree(), 130);
        assert!(max_rel(m.coeffs(), &convolve_direct(big_p.coeffs(), big_q.coeffs())) < 1e-12);
    }

    #[test]
    fn matrix_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_mat(&mut rng, 3);
        assert!(mat_rel(&matpoly_mul(&a, &MatPoly2::identity()), &a) < 1e-15);
        let x = ComplexPoly::monomial(1);
        let z = ComplexPoly::zeros(0);
        let dx1 = MatPoly2::new(x.clone(), z.clone(), z.clone(), ComplexPoly::one());
        let d1x = MatPoly2::new(ComplexPoly::one(), z.clone(), z.clone(), x.clone());
        let prod = matpoly_mul(&dx1, &d1x);
        let expect = MatPoly2::new(x.clone(), z.clone(), z, x);
        assert!(mat_rel(&prod, &expect) < 1e-15);
    }

    #[test]
    fn matmul_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for degree in [3, 40] {
            let a = random_mat(&mut rng, degree);
            let b = random_mat(&mut rng, degree);
            let m = matpoly_mul(&a, &b);
            assert_eq!(m.degree(), 2 * degree);
            assert!(mat_rel(&m, &brute_matmul(&a, &b)) < 1e-12);
        }
    }

    #[test]
    fn tree_order_and_identity() {
        let ids = vec![MatPoly2::identity(); 8];
        assert!(mat_rel(&tree_product(&ids).unwrap(), &MatPoly2::identity()) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = random_mat(&mut rng, 2);
        let b = random_mat(&mut rng, 2);
        let t = tree_product(&[a.clone(), b.clone()]).unwrap();
        assert!(mat_rel(&t, &brute_matmul(&b, &a)) < 1e-14);
        assert!(matches!(tree_product(&[]), Err(NftError::EmptyProduct)));
    }

    #[test]
    fn tree_matches_sequential_for_all_small_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for k in 1..=32 {
            let factors: Vec<MatPoly2> = (0..k).map(|_| random_mat(&mut rng, 2)).collect();
            let mut seq = factors[0].clone();
            for f in &factors[1..] {
                seq = brute_matmul(f, &seq);
            }
            let tree = tree_product(&factors).unwrap();
            assert_eq!(tree.degree(), 2 * k);
            assert!(mat_rel(&tree, &seq) < 1e-10, "k = {k}");
        }
    }

    #[test]
    fn scalar_tree_matches_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let factors: Vec<ComplexPoly> = (0..23).map(|_| random_poly(&mut rng, 2)).collect();
        let mut seq = factors[0].clone();
        for f in &factors[1..] {
            seq = ComplexPoly::new(convolve_direct(f.coeffs(), seq.coeffs()));
        }
        assert!(max_rel(poly_tree_product(&factors).unwrap().coeffs(), seq.coeffs()) < 1e-10);
    }

    #[test]
    fn roots_of_unity_evaluation() {
        let ones = eval_roots_of_unity(&ComplexPoly::one(), 8).unwrap();
        assert!(ones.iter().all(|v| (v - c(1.0, 0.0)).norm() < 1e-15));
        let x = eval_roots_of_unity(&ComplexPoly::monomial(1), 4).unwrap();
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        assert!(max_rel(&x, &expect) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let p = random_poly(&mut rng, 10);
        let vals = eval_roots_of_unity(&p, 32).unwrap();
        for (j, v) in vals.iter().enumerate() {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 32.0);
            let horner = p.coeffs().iter().rev().fold(c(0.0, 0.0), |acc, a| acc * w + a);
            assert!((v - horner).norm() < 1e-12 * horner.norm().max(1.0));
        }
        assert!(matches!(eval_roots_of_unity(&p, 8), Err(NftError::TooFewNodes { .. })));
        assert!(matches!(eval_roots_of_unity(&p, 24), Err(NftError::NotPowerOfTwo(24))));
    }
}
