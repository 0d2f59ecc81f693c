#![allow(dead_code)]

use std::collections::BTreeSet;

use palinfrac::{BigRational, JFraction, JacobiMatrix, Polynomial};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `n/d` with `|n| <= max`, `1 <= d <= max`.
pub fn rational(rng: &mut TestRng, max: i64) -> BigRational {
    frac(rng.gen_range(-max..=max), rng.gen_range(1..=max))
}

pub fn positive_rational(rng: &mut TestRng, max: i64) -> BigRational {
    frac(rng.gen_range(1..=max), rng.gen_range(1..=max))
}

pub fn random_jfraction(rng: &mut TestRng, max_n: usize, max: i64) -> JFraction {
    let n = rng.gen_range(0..=max_n);
    let a = (0..=n).map(|_| rational(rng, max)).collect();
    let b2 = (0..n).map(|_| positive_rational(rng, max)).collect();
    JFraction::new(a, b2).unwrap()
}

fn mirror<T: Clone>(half: Vec<T>, len: usize) -> Vec<T> {
    (0..len).map(|k| half[k.min(len - 1 - k)].clone()).collect()
}

pub fn random_palindromic_jfraction(rng: &mut TestRng, max_n: usize, max: i64) -> JFraction {
    let n = rng.gen_range(0..=max_n);
    let a_half = (0..=n / 2).map(|_| rational(rng, max)).collect();
    let b_half = (0..n.div_ceil(2))
        .map(|_| positive_rational(rng, max))
        .collect();
    JFraction::new(
        mirror(a_half, n + 1),
        if n == 0 { vec![] } else { mirror(b_half, n) },
    )
    .unwrap()
}

/// A J-fraction with `N >= 1` whose coefficient sequences are not both
/// palindromes.
pub fn random_non_palindromic_jfraction(rng: &mut TestRng, max_n: usize, max: i64) -> JFraction {
    loop {
        let mut jf = random_jfraction(rng, max_n, max);
        if jf.n() == 0 {
            continue;
        }
        if jf.is_palindrome() {
            // break the mirror in the first diagonal entry
            let mut a = jf.a().to_vec();
            a[0] += BigRational::from_integer(1.into());
            jf = JFraction::new(a, jf.b2().to_vec()).unwrap();
        }
        if !jf.is_palindrome() {
            return jf;
        }
    }
}

/// `count` distinct rationals `k/den` with `|k| <= 10 den`, sorted.
pub fn distinct_rationals(rng: &mut TestRng, count: usize) -> Vec<BigRational> {
    let den = rng.gen_range(1..=6);
    let mut set = BTreeSet::new();
    while set.len() < count {
        set.insert(rng.gen_range(-10 * den..=10 * den));
    }
    set.into_iter().map(|k| frac(k, den)).collect()
}

/// Monic `(P, Q)` with `deg P = n` whose rational roots strictly interlace.
pub fn interlacing_pair(rng: &mut TestRng, n: usize) -> (Polynomial, Polynomial) {
    let roots = distinct_rationals(rng, 2 * n - 1);
    let p_roots: Vec<_> = roots.iter().step_by(2).cloned().collect();
    let q_roots: Vec<_> = roots.iter().skip(1).step_by(2).cloned().collect();
    (
        Polynomial::from_roots(&p_roots),
        Polynomial::from_roots(&q_roots),
    )
}

/// Interlacing read directly off two sorted root lists.
pub fn roots_interlace(p_roots: &[BigRational], q_roots: &[BigRational]) -> bool {
    p_roots.len() == q_roots.len() + 1
        && p_roots.windows(2).all(|w| w[0] < w[1])
        && q_roots
            .iter()
            .enumerate()
            .all(|(k, r)| p_roots[k] < *r && *r < p_roots[k + 1])
}

/// Monic `(P, Q)` with rational roots, `deg P = n >= 2`, whose roots do not
/// interlace: an interlacing configuration with one root of `Q` moved into a
/// different gap, onto a root of `P`, or outside the hull of `P`'s roots.
pub fn non_interlacing_pair(rng: &mut TestRng, n: usize) -> (Polynomial, Polynomial) {
    assert!(n >= 2);
    loop {
        let roots = distinct_rationals(rng, 2 * n - 1);
        let p_roots: Vec<_> = roots.iter().step_by(2).cloned().collect();
        let mut q_roots: Vec<_> = roots.iter().skip(1).step_by(2).cloned().collect();
        let k = rng.gen_range(0..q_roots.len());
        q_roots[k] = match rng.gen_range(0..3) {
            0 => p_roots.choose(rng).unwrap().clone(),
            1 => &p_roots[n - 1] + positive_rational(rng, 5),
            _ => {
                let gap = rng.gen_range(0..n - 1);
                (&p_roots[gap] + &p_roots[gap + 1]) / frac(2, 1)
            }
        };
        q_roots.sort();
        if !roots_interlace(&p_roots, &q_roots) {
            return (
                Polynomial::from_roots(&p_roots),
                Polynomial::from_roots(&q_roots),
            );
        }
    }
}

/// Random polynomial of degree `<= max_deg` with small rational coefficients.
pub fn random_poly(rng: &mut TestRng, max_deg: usize) -> Polynomial {
    let d = rng.gen_range(0..=max_deg);
    Polynomial::new((0..=d).map(|_| rational(rng, 9)).collect())
}

pub fn random_monic(rng: &mut TestRng, deg: usize) -> Polynomial {
    let mut c: Vec<_> = (0..deg).map(|_| rational(rng, 9)).collect();
    c.push(frac(1, 1));
    Polynomial::new(c)
}

pub fn random_jacobi(rng: &mut TestRng, size: usize) -> JacobiMatrix {
    let diag = (0..size).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let offdiag = (0..size - 1).map(|_| rng.gen_range(0.5..2.0)).collect();
    JacobiMatrix::new(diag, offdiag).unwrap()
}

pub fn random_persymmetric(rng: &mut TestRng, size: usize) -> JacobiMatrix {
    let diag: Vec<f64> = (0..size.div_ceil(2))
        .map(|_| rng.gen_range(-2.0..2.0))
        .collect();
    let off: Vec<f64> = (0..size / 2).map(|_| rng.gen_range(0.5..2.0)).collect();
    let offdiag = if size > 1 {
        mirror(off, size - 1)
    } else {
        vec![]
    };
    JacobiMatrix::new(mirror(diag, size), offdiag).unwrap()
}

/// A persymmetric chain of `size >= 2` with one entry moved off its mirror
/// image by at least `1e-3`.
pub fn perturbed_non_persymmetric(rng: &mut TestRng, size: usize) -> JacobiMatrix {
    assert!(size >= 2);
    let h = random_persymmetric(rng, size);
    let mut diag = h.diag().to_vec();
    let mut offdiag = h.offdiag().to_vec();
    let delta = rng.gen_range(1e-3..1e-1) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    // entries that are their own mirror image cannot break the symmetry
    let diag_ok: Vec<usize> = (0..size).filter(|&k| 2 * k + 1 != size).collect();
    let off_ok: Vec<usize> = (0..size - 1).filter(|&k| 2 * k + 2 != size).collect();
    if off_ok.is_empty() || rng.gen_bool(0.5) {
        diag[*diag_ok.choose(rng).unwrap()] += delta;
    } else {
        offdiag[*off_ok.choose(rng).unwrap()] += delta.abs();
    }
    JacobiMatrix::new(diag, offdiag).unwrap()
}

pub fn coprime(a: u64, b: u64) -> bool {
    num_integer::gcd(a, b) == 1
}
