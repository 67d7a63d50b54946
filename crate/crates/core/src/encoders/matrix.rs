//! Connection matrices and their on-disk container.
//!
//! Container layout (all integers little-endian):
//!
//! ```text
//! magic      4 bytes  "SNPM"
//! version    u16      1
//! layout     u8       0 = sparse binary, 1 = dense real, 2 = identity
//! flags      u8       bit 0 = fixed fan-out
//! n_pn       u32      input dimension
//! rows       u32      n_kc (or n_pn for identity)
//! seed       u64
//! body
//!   sparse:  per row: u32 count, then `count` u32 column indices
//!   dense:   rows * n_pn f64 weights, row-major
//!   identity: empty
//! ```

use std::io::{Read, Write};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, StandardNormal};

use super::{EncoderConfig, Model};
use crate::analysis::OpTally;
use crate::error::{argument, config, Error, Result};

const MAGIC: &[u8; 4] = b"SNPM";
const VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    SparseBinary,
    DenseReal,
    Identity,
}

impl Layout {
    fn tag(self) -> u8 {
        match self {
            Layout::SparseBinary => 0,
            Layout::DenseReal => 1,
            Layout::Identity => 2,
        }
    }

    fn from_tag(tag: u8) -> Result<Self> {
        Ok(match tag {
            0 => Layout::SparseBinary,
            1 => Layout::DenseReal,
            2 => Layout::Identity,
            t => return Err(Error::Format(format!("unknown layout tag {t}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Weights {
    /// CSR: row `j` connects to `indices[offsets[j]..offsets[j + 1]]`.
    Sparse { offsets: Vec<usize>, indices: Vec<u32> },
    Dense { rows: usize, data: Vec<f64> },
    Identity,
}

/// The fixed (non-plastic) connection matrix W. There is no mutable access
/// after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    n_pn: usize,
    seed: u64,
    fixed_fanout: bool,
    weights: Weights,
}

impl ProjectionMatrix {
    /// Builds a sparse binary matrix from explicit index lists. Each list must be
    /// strictly increasing with entries below `n_pn`.
    pub fn from_sparse_rows(n_pn: usize, rows: &[Vec<u32>], seed: u64) -> Result<Self> {
        if n_pn == 0 || rows.is_empty() {
            return config("sparse matrix needs n_pn >= 1 and at least one row");
        }
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        offsets.push(0);
        for (j, row) in rows.iter().enumerate() {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return argument(format!("row {j} is not strictly increasing"));
            }
            if row.last().is_some_and(|&i| i as usize >= n_pn) {
                return argument(format!("row {j} has an index >= n_pn = {n_pn}"));
            }
            indices.extend_from_slice(row);
            offsets.push(indices.len());
        }
        let fanout = rows[0].len();
        Ok(ProjectionMatrix {
            n_pn,
            seed,
            fixed_fanout: rows.iter().all(|r| r.len() == fanout),
            weights: Weights::Sparse { offsets, indices },
        })
    }

    /// Builds a dense matrix from row-major weights (`rows * n_pn` finite values).
    pub fn from_dense(n_pn: usize, rows: usize, data: Vec<f64>, seed: u64) -> Result<Self> {
        if n_pn == 0 || rows == 0 {
            return config("dense matrix needs n_pn >= 1 and rows >= 1");
        }
        if data.len() != rows * n_pn {
            return argument(format!("expected {} weights, got {}", rows * n_pn, data.len()));
        }
        if data.iter().any(|w| !w.is_finite()) {
            return argument("dense weights must be finite");
        }
        Ok(ProjectionMatrix {
            n_pn,
            seed,
            fixed_fanout: false,
            weights: Weights::Dense { rows, data },
        })
    }

    pub fn identity(n_pn: usize) -> Result<Self> {
        if n_pn == 0 {
            return config("identity needs n_pn >= 1");
        }
        Ok(ProjectionMatrix {
            n_pn,
            seed: 0,
            fixed_fanout: false,
            weights: Weights::Identity,
        })
    }

    pub fn layout(&self) -> Layout {
        match self.weights {
            Weights::Sparse { .. } => Layout::SparseBinary,
            Weights::Dense { .. } => Layout::DenseReal,
            Weights::Identity => Layout::Identity,
        }
    }

    pub fn n_pn(&self) -> usize {
        self.n_pn
    }

    pub fn rows(&self) -> usize {
        match &self.weights {
            Weights::Sparse { offsets, .. } => offsets.len() - 1,
            Weights::Dense { rows, .. } => *rows,
            Weights::Identity => self.n_pn,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// True when every sparse row has the same number of connections.
    pub fn is_fixed_fanout(&self) -> bool {
        self.fixed_fanout
    }

    /// Column indices of sparse row `j`.
    pub fn sparse_row(&self, j: usize) -> Option<&[u32]> {
        match &self.weights {
            Weights::Sparse { offsets, indices } => Some(&indices[offsets[j]..offsets[j + 1]]),
            _ => None,
        }
    }

    pub fn dense_row(&self, j: usize) -> Option<&[f64]> {
        match &self.weights {
            Weights::Dense { data, .. } => Some(&data[j * self.n_pn..(j + 1) * self.n_pn]),
            _ => None,
        }
    }

    /// Connections per row (sparse layout only).
    pub fn fanouts(&self) -> Vec<usize> {
        match &self.weights {
            Weights::Sparse { offsets, .. } => offsets.windows(2).map(|w| w[1] - w[0]).collect(),
            _ => Vec::new(),
        }
    }

    /// Row-major dense copy of W, whatever the layout. Intended for oracles.
    pub fn densify(&self) -> Vec<f64> {
        let rows = self.rows();
        let mut out = vec![0.0; rows * self.n_pn];
        match &self.weights {
            Weights::Sparse { .. } => {
                for j in 0..rows {
                    for &i in self.sparse_row(j).unwrap() {
                        out[j * self.n_pn + i as usize] = 1.0;
                    }
                }
            }
            Weights::Dense { data, .. } => out.copy_from_slice(data),
            Weights::Identity => {
                for j in 0..rows {
                    out[j * self.n_pn + j] = 1.0;
                }
            }
        }
        out
    }

    /// Integer W·x for the sparse binary layout. A row with `c` connections
    /// costs `c - 1` additions.
    pub(crate) fn sparse_matvec<T: OpTally>(&self, x: &[u8], tally: &mut T) -> Vec<u32> {
        let Weights::Sparse { offsets, indices } = &self.weights else {
            unreachable!("sparse_matvec on a non-sparse matrix");
        };
        let mut out = Vec::with_capacity(offsets.len() - 1);
        for w in offsets.windows(2) {
            let row = &indices[w[0]..w[1]];
            out.push(row.iter().map(|&i| u32::from(x[i as usize])).sum());
            tally.encode_adds(row.len().saturating_sub(1) as u64);
        }
        out
    }

    /// Real-valued W·x for the dense layout: `n_pn` multiplications and
    /// `n_pn - 1` additions per row.
    pub(crate) fn dense_matvec<T: OpTally>(&self, x: &[u8], tally: &mut T) -> Vec<f64> {
        let Weights::Dense { rows, data } = &self.weights else {
            unreachable!("dense_matvec on a non-dense matrix");
        };
        let xf: Vec<f64> = x.iter().map(|&v| f64::from(v)).collect();
        let out: Vec<f64> = data
            .chunks_exact(self.n_pn)
            .map(|row| row.iter().zip(&xf).map(|(w, v)| w * v).sum())
            .collect();
        tally.encode_mults((rows * self.n_pn) as u64);
        tally.encode_adds((rows * (self.n_pn - 1)) as u64);
        out
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&[self.layout().tag(), u8::from(self.fixed_fanout)])?;
        w.write_all(&dim_u32(self.n_pn)?.to_le_bytes())?;
        w.write_all(&dim_u32(self.rows())?.to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        match &self.weights {
            Weights::Sparse { .. } => {
                for j in 0..self.rows() {
                    let row = self.sparse_row(j).unwrap();
                    w.write_all(&(row.len() as u32).to_le_bytes())?;
                    for &i in row {
                        w.write_all(&i.to_le_bytes())?;
                    }
                }
            }
            Weights::Dense { data, .. } => {
                for v in data {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
            Weights::Identity => {}
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad matrix magic".into()));
        }
        let version = read_u16(&mut r)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported matrix version {version}")));
        }
        let mut tags = [0u8; 2];
        r.read_exact(&mut tags)?;
        let layout = Layout::from_tag(tags[0])?;
        let n_pn = read_u32(&mut r)? as usize;
        let rows = read_u32(&mut r)? as usize;
        let seed = read_u64(&mut r)?;
        let m = match layout {
            Layout::SparseBinary => {
                let mut lists = Vec::with_capacity(rows);
                for _ in 0..rows {
                    let count = read_u32(&mut r)? as usize;
                    if count > n_pn {
                        return Err(Error::Format("row longer than n_pn".into()));
                    }
                    let row = (0..count).map(|_| read_u32(&mut r)).collect::<Result<Vec<_>>>()?;
                    lists.push(row);
                }
                Self::from_sparse_rows(n_pn, &lists, seed)?
            }
            Layout::DenseReal => {
                let data = (0..rows * n_pn).map(|_| read_f64(&mut r)).collect::<Result<Vec<_>>>()?;
                Self::from_dense(n_pn, rows, data, seed)?
            }
            Layout::Identity => {
                if rows != n_pn {
                    return Err(Error::Format("identity matrix must be square".into()));
                }
                Self::identity(n_pn)?
            }
        };
        if tags[1] & 1 == 1 && !m.fixed_fanout {
            return Err(Error::Format("fixed fan-out flag set but row lengths differ".into()));
        }
        Ok(m)
    }
}

fn dim_u32(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::Format(format!("dimension {n} exceeds u32")))
}

pub(crate) fn read_u16<R: Read>(r: &mut R) -> Result<u16> {
    let mut b = [0u8; 2];
    r.read_exact(&mut b)?;
    Ok(u16::from_le_bytes(b))
}

pub(crate) fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub(crate) fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    Ok(f64::from_bits(read_u64(r)?))
}

/// Samples the sparse binary PN→KC matrix. By default every entry is an
/// independent Bernoulli(theta) draw (sampled row by row via geometric gaps
/// between successive connections). In fixed fan-out mode each row instead
/// gets exactly `round(theta * n_pn)` distinct inputs.
pub fn init_flyhash_weights(cfg: &EncoderConfig) -> Result<ProjectionMatrix> {
    if cfg.model != Model::FlyHash {
        return config(format!("init_flyhash_weights called for {:?}", cfg.model));
    }
    cfg.validate()?;
    let n_pn = cfg.n_pn;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::with_capacity(cfg.n_kc);
    if cfg.fixed_fanout {
        let fanout = cfg.fanout();
        for _ in 0..cfg.n_kc {
            let mut row: Vec<u32> = index::sample(&mut rng, n_pn, fanout)
                .into_iter()
                .map(|i| i as u32)
                .collect();
            row.sort_unstable();
            rows.push(row);
        }
    } else {
        let gaps = Geometric::new(cfg.theta).map_err(|e| Error::Config(e.to_string()))?;
        for _ in 0..cfg.n_kc {
            let mut row = Vec::new();
            // Position of the next connection = previous + 1 + number of failures.
            let mut next = gaps.sample(&mut rng);
            while next < n_pn as u64 {
                row.push(next as u32);
                next = next + 1 + gaps.sample(&mut rng);
            }
            rows.push(row);
        }
    }
    let mut m = ProjectionMatrix::from_sparse_rows(n_pn, &rows, cfg.seed)?;
    m.fixed_fanout = cfg.fixed_fanout;
    Ok(m)
}

/// Samples the dense Gaussian matrix, `n_kc` rows of `n_pn` N(0, 1) weights.
pub fn init_lsh_weights(cfg: &EncoderConfig) -> Result<ProjectionMatrix> {
    if cfg.model != Model::ConvLsh {
        return config(format!("init_lsh_weights called for {:?}", cfg.model));
    }
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let data: Vec<f64> = (0..cfg.n_kc * cfg.n_pn)
        .map(|_| rng.sample(StandardNormal))
        .collect();
    ProjectionMatrix::from_dense(cfg.n_pn, cfg.n_kc, data, cfg.seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fly(n_kc: usize, seed: u64) -> EncoderConfig {
        EncoderConfig {
            seed,
            ..EncoderConfig::fly_hash(n_kc, 0.1)
        }
    }

    #[test]
    fn bernoulli_mean_fanout_near_ten() {
        let m = init_flyhash_weights(&fly(20_000, 3)).unwrap();
        let f = m.fanouts();
        let mean = f.iter().sum::<usize>() as f64 / f.len() as f64;
        assert!((9.0..=11.0).contains(&mean), "mean fan-out {mean}");
        assert!(!m.is_fixed_fanout());
        for j in 0..m.rows() {
            let row = m.sparse_row(j).unwrap();
            assert!(row.windows(2).all(|w| w[0] < w[1]));
            assert!(row.iter().all(|&i| (i as usize) < 726));
        }
    }

    #[test]
    fn fixed_fanout_is_exact() {
        let cfg = EncoderConfig {
            fixed_fanout: true,
            ..fly(500, 9)
        };
        let m = init_flyhash_weights(&cfg).unwrap();
        assert!(m.fanouts().iter().all(|&c| c == 10));
        assert!(m.is_fixed_fanout());
    }

    #[test]
    fn zero_theta_is_a_config_error() {
        let cfg = EncoderConfig {
            theta: 0.0,
            ..fly(100, 1)
        };
        assert!(matches!(init_flyhash_weights(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn seeded_matrices_are_identical() {
        assert_eq!(
            init_flyhash_weights(&fly(2000, 1234)).unwrap(),
            init_flyhash_weights(&fly(2000, 1234)).unwrap()
        );
        assert_ne!(
            init_flyhash_weights(&fly(2000, 1234)).unwrap(),
            init_flyhash_weights(&fly(2000, 1235)).unwrap()
        );
        let lsh = EncoderConfig {
            seed: 1234,
            ..EncoderConfig::conv_lsh(50)
        };
        assert_eq!(init_lsh_weights(&lsh).unwrap(), init_lsh_weights(&lsh).unwrap());
    }

    #[test]
    fn gaussian_moments() {
        let cfg = EncoderConfig {
            seed: 77,
            ..EncoderConfig::conv_lsh(4000)
        };
        let m = init_lsh_weights(&cfg).unwrap();
        let w = m.densify();
        let n = w.len() as f64;
        let mean = w.iter().sum::<f64>() / n;
        let var = w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() <= 0.01, "mean {mean}");
        assert!((0.98..=1.02).contains(&var), "variance {var}");
    }

    #[test]
    fn single_row_lsh() {
        let m = init_lsh_weights(&EncoderConfig::conv_lsh(1)).unwrap();
        assert_eq!(m.rows(), 1);
        assert_eq!(m.dense_row(0).unwrap().len(), 726);
    }

    #[test]
    fn zero_dimensions_rejected() {
        let cfg = EncoderConfig {
            n_kc: 0,
            ..EncoderConfig::conv_lsh(1)
        };
        assert!(init_lsh_weights(&cfg).is_err());
        assert!(ProjectionMatrix::from_sparse_rows(0, &[vec![]], 0).is_err());
    }

    #[test]
    fn malformed_sparse_rows_rejected() {
        assert!(ProjectionMatrix::from_sparse_rows(5, &[vec![1, 1]], 0).is_err());
        assert!(ProjectionMatrix::from_sparse_rows(5, &[vec![3, 2]], 0).is_err());
        assert!(ProjectionMatrix::from_sparse_rows(5, &[vec![5]], 0).is_err());
    }

    #[test]
    fn container_round_trip_all_layouts() {
        let sparse = init_flyhash_weights(&fly(300, 2)).unwrap();
        let dense = init_lsh_weights(&EncoderConfig::conv_lsh(20)).unwrap();
        let ident = ProjectionMatrix::identity(726).unwrap();
        for m in [sparse, dense, ident] {
            let mut buf = Vec::new();
            m.write_to(&mut buf).unwrap();
            assert_eq!(ProjectionMatrix::read_from(buf.as_slice()).unwrap(), m);
        }
    }

    #[test]
    fn container_rejects_garbage() {
        assert!(ProjectionMatrix::read_from(&b"NOPE\x01\x00"[..]).is_err());
        let mut buf = Vec::new();
        ProjectionMatrix::identity(4).unwrap().write_to(&mut buf).unwrap();
        buf[6] = 9;
        assert!(matches!(ProjectionMatrix::read_from(buf.as_slice()), Err(Error::Format(_))));
    }
}
