//! Test-only reference implementations, kept independent of the library's
//! estimator code paths.

#![allow(dead_code)]

pub mod configs;

use rand::Rng;

/// `I(next; env | current)` by literal triple summation over conditionals,
/// re-deriving every marginal inside the loops. `p` is laid out
/// `[next][current][env]` and need not be normalised.
pub fn naive_cmi(p: &[f64], dims: [usize; 3]) -> f64 {
    let [nn, nc, ne] = dims;
    let at = |n: usize, c: usize, e: usize| p[(n * nc + c) * ne + e];
    let total: f64 = p.iter().sum();
    let mut cmi = 0.0;
    for c in 0..nc {
        let mut p_c = 0.0;
        for n in 0..nn {
            for e in 0..ne {
                p_c += at(n, c, e) / total;
            }
        }
        if p_c == 0.0 {
            continue;
        }
        for n in 0..nn {
            for e in 0..ne {
                let joint_given_c = at(n, c, e) / total / p_c;
                if joint_given_c == 0.0 {
                    continue;
                }
                let mut next_given_c = 0.0;
                for e2 in 0..ne {
                    next_given_c += at(n, c, e2) / total / p_c;
                }
                let mut env_given_c = 0.0;
                for n2 in 0..nn {
                    env_given_c += at(n2, c, e) / total / p_c;
                }
                cmi += p_c * joint_given_c * (joint_given_c / (next_given_c * env_given_c)).log2();
            }
        }
    }
    cmi
}

/// `I(state; env)` by literal double summation, `p` laid out `[state][env]`.
pub fn naive_mi(p: &[f64], dims: [usize; 2]) -> f64 {
    let [nx, ne] = dims;
    let total: f64 = p.iter().sum();
    let mut mi = 0.0;
    for x in 0..nx {
        for e in 0..ne {
            let pxe = p[x * ne + e] / total;
            if pxe == 0.0 {
                continue;
            }
            let px: f64 = (0..ne).map(|e2| p[x * ne + e2] / total).sum();
            let pe: f64 = (0..nx).map(|x2| p[x2 * ne + e] / total).sum();
            mi += pxe * (pxe / (px * pe)).log2();
        }
    }
    mi
}

/// Random table with roughly `zero_frac` of its entries exactly zero.
pub fn random_table<R: Rng>(rng: &mut R, len: usize, zero_frac: f64) -> Vec<f64> {
    (0..len)
        .map(|_| {
            if rng.random_bool(zero_frac) {
                0.0
            } else {
                rng.random::<f64>()
            }
        })
        .collect()
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &t in &idx[i..=j] {
                r[t] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}
