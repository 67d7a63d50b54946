//! Efficiency arithmetic: entropy bounds on hash compression, memory
//! capacity of a sparse code, storage sizes and run-time operation counts.

mod ops;

pub use ops::{instrumented_counts, op_counts, OpCountReport, OpTally};

use serde::{Deserialize, Serialize};

use crate::encoders::Model;
use crate::error::{argument, Result};

/// Bits assumed per binary element, greyscale value and real number.
pub const BINARY_BITS: u64 = 1;
pub const GREY_BITS: u64 = 8;
pub const REAL_BITS: u64 = 64;

/// Entropy in bits of a Bernoulli(kappa) symbol, with `0 log 0 = 0`.
pub fn bernoulli_entropy(kappa: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&kappa) {
        return argument(format!("kappa must lie in [0, 1], got {kappa}"));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(kappa) + term(1.0 - kappa))
}

/// Shannon lower bound, in bits, on losslessly coding an `n_kc`-bit hash
/// whose bits are Bernoulli(kappa).
pub fn compression_lower_bound(n_kc: usize, kappa: f64) -> Result<f64> {
    Ok(n_kc as f64 * bernoulli_entropy(kappa)?)
}

/// Bits to store one hash as a compressed-sparse-row index list:
/// `round(kappa * n_kc)` indices of `index_bits` each.
pub fn csr_bits(n_kc: usize, kappa: f64, index_bits: u32) -> Result<u64> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return argument(format!("kappa must lie in (0, 1), got {kappa}"));
    }
    let k = (kappa * n_kc as f64).round() as u64;
    Ok(k * u64::from(index_bits))
}

/// Approximate number of items a single readout neuron over `n_kc` cells of
/// sparsity `kappa` can store before a novel input is mistaken for a
/// familiar one with probability `p_error`:
///
/// `m = (ln(1 - p_error^(1/n_kc)) - ln kappa) / ln(1 - kappa)`
pub fn memory_capacity(n_kc: usize, kappa: f64, p_error: f64) -> Result<f64> {
    if n_kc == 0 {
        return argument("n_kc must be >= 1");
    }
    if !(kappa > 0.0 && kappa < 1.0) {
        return argument(format!("kappa must lie in (0, 1), got {kappa}"));
    }
    if !(p_error > 0.0 && p_error < 1.0) {
        return argument(format!("p_error must lie in (0, 1), got {p_error}"));
    }
    // 1 - p^(1/n) computed as -expm1(ln(p)/n) to keep precision for large n.
    let miss = -(p_error.ln() / n_kc as f64).exp_m1();
    Ok((miss.ln() - kappa.ln()) / (-kappa).ln_1p())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StorageReport {
    pub model: Model,
    pub n_pn: u64,
    pub n_kc: u64,
    /// Size of the connection matrix.
    pub w_bits: u64,
    /// Size of one memory item.
    pub y_bits: u64,
    pub n_items: u64,
    /// `w_bits + n_items * y_bits`.
    pub total_bits: u64,
}

/// Storage cost under 1-bit binaries, 8-bit greyscale and 64-bit reals.
pub fn storage_size(model: Model, n_pn: usize, n_kc: usize, n_items: usize) -> Result<StorageReport> {
    if n_pn == 0 || (model != Model::PerfectMemory && n_kc == 0) {
        return argument("storage_size needs positive dimensions");
    }
    let (n_pn, n_kc) = (n_pn as u64, n_kc as u64);
    let (w_bits, y_bits) = match model {
        Model::FlyHash => (BINARY_BITS * n_pn * n_kc, BINARY_BITS * n_kc),
        Model::ConvLsh => (REAL_BITS * n_pn * n_kc, BINARY_BITS * n_kc),
        Model::PerfectMemory => (0, GREY_BITS * n_pn),
    };
    Ok(StorageReport {
        model,
        n_pn,
        n_kc,
        w_bits,
        y_bits,
        n_items: n_items as u64,
        total_bits: w_bits + n_items as u64 * y_bits,
    })
}

/// Lossless lower bound on the bits of one stored item: `n_kc * H(kappa)`
/// for the hash models, the raw size for perfect memory.
pub fn entropy_bits_per_item(model: Model, n_pn: usize, n_kc: usize, kappa: f64) -> Result<f64> {
    match model {
        Model::FlyHash => compression_lower_bound(n_kc, kappa),
        Model::ConvLsh => compression_lower_bound(n_kc, 0.5),
        Model::PerfectMemory => Ok((GREY_BITS * n_pn as u64) as f64),
    }
}

/// Spearman rank correlation with average ranks for ties.
pub fn rank_correlation(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return argument("rank correlation needs two equal-length samples of size >= 2");
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return argument("rank correlation undefined for a constant sample");
    }
    Ok(sxy / (sxx * syy).sqrt())
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_reference_values() {
        assert!((bernoulli_entropy(0.1).unwrap() - 0.4690).abs() < 1e-4);
        assert!((bernoulli_entropy(0.05).unwrap() - 0.2864).abs() < 1e-4);
        assert_eq!(bernoulli_entropy(0.5).unwrap(), 1.0);
        assert_eq!(bernoulli_entropy(0.0).unwrap(), 0.0);
        assert_eq!(bernoulli_entropy(1.0).unwrap(), 0.0);
        assert!(bernoulli_entropy(-0.1).is_err());
        assert!(bernoulli_entropy(1.5).is_err());
    }

    #[test]
    fn entropy_symmetric_and_bounded() {
        for i in 0..=100 {
            let k = i as f64 / 100.0;
            let h = bernoulli_entropy(k).unwrap();
            assert!((h - bernoulli_entropy(1.0 - k).unwrap()).abs() < 1e-12);
            assert!(h <= 1.0);
            let bound = compression_lower_bound(1000, k).unwrap();
            assert!(bound <= 1000.0);
            assert_eq!(bound == 1000.0, i == 50);
        }
    }

    #[test]
    fn compression_bound_at_32000() {
        // 32000 * H(0.05) = 9164.78...
        let b = compression_lower_bound(32000, 0.05).unwrap();
        assert!((b - 9164.8).abs() <= 4.0, "{b}");
        assert_eq!(compression_lower_bound(32000, 0.5).unwrap(), 32000.0);
        assert_eq!(csr_bits(32000, 0.05, 16).unwrap(), 25600);
    }

    #[test]
    fn capacity_examples() {
        let m = memory_capacity(330, 0.05, 0.01).unwrap();
        assert!((24.5..=25.5).contains(&m), "{m}");
        let m2 = memory_capacity(330, 0.1, 0.01).unwrap();
        let m3 = memory_capacity(330, 0.2, 0.01).unwrap();
        assert!(m > m2 && m2 > m3);
        assert!(memory_capacity(330, 0.05, 1.0).is_err());
        assert!(memory_capacity(330, 0.05, 0.0).is_err());
        assert!(memory_capacity(0, 0.05, 0.5).is_err());
        assert!(memory_capacity(330, 1.0, 0.5).is_err());
        // grows without bound as p_error approaches 1
        assert!(memory_capacity(330, 0.05, 1.0 - 1e-12).unwrap() > memory_capacity(330, 0.05, 0.99).unwrap());
    }

    #[test]
    fn capacity_grid_monotonicity() {
        // The formula only behaves as a capacity while kappa is well above
        // 1 - p^(1/n); below that it turns over and eventually goes negative.
        for &n in &[330, 1000, 4000] {
            let mut prev = f64::INFINITY;
            for &k in &[0.05, 0.1, 0.2, 0.5] {
                let m = memory_capacity(n, k, 0.01).unwrap();
                assert!(m < prev);
                prev = m;
                assert!(memory_capacity(n * 2, k, 0.01).unwrap() > m);
            }
        }
    }

    #[test]
    fn storage_table() {
        let pm = storage_size(Model::PerfectMemory, 726, 0, 25).unwrap();
        assert_eq!((pm.w_bits, pm.y_bits, pm.total_bits), (0, 5808, 25 * 5808));
        let fh = storage_size(Model::FlyHash, 726, 32000, 25).unwrap();
        assert_eq!((fh.w_bits, fh.y_bits), (726 * 32000, 32000));
        let lsh = storage_size(Model::ConvLsh, 726, 4000, 1).unwrap();
        assert_eq!(lsh.w_bits, 185_856_000);
        assert_eq!(lsh.total_bits, 185_856_000 + 4000);
        assert!(storage_size(Model::FlyHash, 726, 0, 1).is_err());
    }

    #[test]
    fn rank_correlation_basics() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((rank_correlation(&x, &[10.0, 20.0, 30.0, 40.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((rank_correlation(&x, &[4.0, 3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(ranks(&[5.0, 1.0, 5.0]), vec![2.5, 1.0, 2.5]);
        assert!(rank_correlation(&x, &[1.0; 4]).is_err());
    }
}
