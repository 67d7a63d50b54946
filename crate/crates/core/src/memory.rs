//! Visual memory: the stored items from a training run and the novelty of a
//! query, i.e. its minimum dissimilarity to any stored item.
//!
//! Store container (little-endian): `"SNMS"`, u16 version, u8 metric
//! (0 = Hamming, 1 = Euclidean), u32 item_dim, u32 item count, then the
//! items back to back (bit-packed u64 words, or raw bytes).

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::analysis::OpTally;
use crate::encoders::{read_u16, read_u32, read_u64, BitVector, Encoder, HashVector, Model};
use crate::error::{argument, state, Error, Result};

const MAGIC: &[u8; 4] = b"SNMS";
const VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Binary hashes.
    Hamming,
    /// Raw grayscale images.
    Euclidean,
}

impl Metric {
    pub fn for_model(model: Model) -> Metric {
        match model {
            Model::PerfectMemory => Metric::Euclidean,
            Model::FlyHash | Model::ConvLsh => Metric::Hamming,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoveltyResult {
    pub d: f64,
    pub argmin_index: usize,
}

/// Distances are compared as exact integers (popcount or sum of squares);
/// only the reported value is converted to a real.
fn raw_distance<T: OpTally>(a: &HashVector, b: &HashVector, metric: Metric, tally: &mut T) -> Result<u64> {
    if a.dim() != b.dim() {
        return argument(format!("dimension mismatch: {} vs {}", a.dim(), b.dim()));
    }
    match (metric, a, b) {
        (Metric::Hamming, HashVector::Binary(a), HashVector::Binary(b)) => {
            let h = a.hamming(b);
            tally.eval_xors(a.len() as u64);
            tally.eval_adds(h);
            Ok(h)
        }
        (Metric::Euclidean, HashVector::Grey(a), HashVector::Grey(b)) => {
            let ss = a
                .iter()
                .zip(b)
                .map(|(&p, &q)| {
                    let diff = i64::from(p) - i64::from(q);
                    (diff * diff) as u64
                })
                .sum();
            // n subtractions, n squares, n-1 accumulations, one square root
            let n = a.len() as u64;
            tally.eval_adds(2 * n - 1);
            tally.eval_squares(n + 1);
            Ok(ss)
        }
        _ => argument(format!("{metric:?} does not apply to these item kinds")),
    }
}

fn finish(raw: u64, metric: Metric) -> f64 {
    match metric {
        Metric::Hamming => raw as f64,
        Metric::Euclidean => (raw as f64).sqrt(),
    }
}

/// Hamming distance between binary items or Euclidean distance between raw items.
pub fn dissimilarity(a: &HashVector, b: &HashVector, metric: Metric) -> Result<f64> {
    dissimilarity_with(a, b, metric, &mut ())
}

pub fn dissimilarity_with<T: OpTally>(a: &HashVector, b: &HashVector, metric: Metric, tally: &mut T) -> Result<f64> {
    raw_distance(a, b, metric, tally).map(|r| finish(r, metric))
}

/// Append-only set of memory items sharing one dimension and metric.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryStore {
    metric: Metric,
    item_dim: usize,
    items: Vec<HashVector>,
}

impl MemoryStore {
    pub fn new(metric: Metric, item_dim: usize) -> Self {
        MemoryStore {
            metric,
            item_dim,
            items: Vec::new(),
        }
    }

    /// An empty store matching an encoder's output.
    pub fn for_encoder(encoder: &Encoder) -> Self {
        let cfg = encoder.config();
        Self::new(Metric::for_model(cfg.model), cfg.output_dim())
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn item_dim(&self) -> usize {
        self.item_dim
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[HashVector] {
        &self.items
    }

    pub fn store_item(&mut self, y: HashVector) -> Result<()> {
        if y.dim() != self.item_dim {
            return argument(format!("item has dim {}, store holds dim {}", y.dim(), self.item_dim));
        }
        let kind_ok = matches!(
            (self.metric, &y),
            (Metric::Hamming, HashVector::Binary(_)) | (Metric::Euclidean, HashVector::Grey(_))
        );
        if !kind_ok {
            return argument(format!("item kind does not match {:?} store", self.metric));
        }
        self.items.push(y);
        Ok(())
    }

    /// Minimum distance from an already encoded item to the store, with the
    /// first index attaining it.
    pub fn nearest(&self, y: &HashVector) -> Result<NoveltyResult> {
        self.nearest_with(y, &mut ())
    }

    pub fn nearest_with<T: OpTally>(&self, y: &HashVector, tally: &mut T) -> Result<NoveltyResult> {
        if self.items.is_empty() {
            return state("novelty is undefined for an empty memory store");
        }
        let mut best = (u64::MAX, 0);
        for (i, item) in self.items.iter().enumerate() {
            let d = raw_distance(y, item, self.metric, tally)?;
            if d < best.0 {
                best = (d, i);
            }
        }
        Ok(NoveltyResult {
            d: finish(best.0, self.metric),
            argmin_index: best.1,
        })
    }

    /// Encodes `x` once and returns its novelty against the store.
    pub fn evaluate_novelty(&self, x: &[u8], encoder: &Encoder) -> Result<NoveltyResult> {
        if self.items.is_empty() {
            return state("novelty is undefined for an empty memory store");
        }
        self.nearest(&encoder.encode(x)?)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&[match self.metric {
            Metric::Hamming => 0,
            Metric::Euclidean => 1,
        }])?;
        let dim = u32::try_from(self.item_dim).map_err(|_| Error::Format("item_dim exceeds u32".into()))?;
        w.write_all(&dim.to_le_bytes())?;
        w.write_all(&(self.items.len() as u32).to_le_bytes())?;
        for item in &self.items {
            match item {
                HashVector::Binary(b) => {
                    for word in b.words() {
                        w.write_all(&word.to_le_bytes())?;
                    }
                }
                HashVector::Grey(g) => w.write_all(g)?,
            }
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad store magic".into()));
        }
        if read_u16(&mut r)? != VERSION {
            return Err(Error::Format("unsupported store version".into()));
        }
        let mut tag = [0u8; 1];
        r.read_exact(&mut tag)?;
        let metric = match tag[0] {
            0 => Metric::Hamming,
            1 => Metric::Euclidean,
            t => return Err(Error::Format(format!("unknown metric tag {t}"))),
        };
        let item_dim = read_u32(&mut r)? as usize;
        let count = read_u32(&mut r)? as usize;
        let mut store = MemoryStore::new(metric, item_dim);
        for _ in 0..count {
            let item = match metric {
                Metric::Hamming => {
                    let words = (0..item_dim.div_ceil(64)).map(|_| read_u64(&mut r)).collect::<Result<Vec<_>>>()?;
                    HashVector::Binary(BitVector::from_words(item_dim, words).map_err(|e| Error::Format(e.to_string()))?)
                }
                Metric::Euclidean => {
                    let mut buf = vec![0u8; item_dim];
                    r.read_exact(&mut buf)?;
                    HashVector::Grey(buf)
                }
            };
            store.store_item(item)?;
        }
        Ok(store)
    }
}
