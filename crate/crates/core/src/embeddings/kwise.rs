use rand::seq::index::sample;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::numerics::{seeded_rng, sub_seed};
use crate::scalar::Scalar;

/// Irreducible polynomials over GF(2), indexed by degree.
const IRREDUCIBLE: [u32; 13] = [
    0, 0b11, 0b111, 0b1011, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x211, 0x409, 0x805, 0x1053,
];
/// Largest supported field width.
pub const MAX_FIELD_WIDTH: u32 = 12;
/// Largest supported independence order.
pub const MAX_K: usize = 8;
/// Spaces with more rows than this are refused.
const MAX_SPACE_SIZE: usize = 1 << 24;
/// Uniformity is checked exhaustively up to this many coordinates.
const EXHAUSTIVE_CHECK_DIM: usize = 10;
const SAMPLED_SUBSETS: usize = 2000;

/// `GF(2^w)` with elements stored as bit patterns of polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryField {
    width: u32,
    modulus: u32,
}

impl BinaryField {
    pub fn new(width: u32) -> Result<Self> {
        if width == 0 || width > MAX_FIELD_WIDTH {
            return Err(Error::domain(format!(
                "field width must be in 1..={MAX_FIELD_WIDTH}, got {width}"
            )));
        }
        Ok(Self {
            width,
            modulus: IRREDUCIBLE[width as usize],
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn size(&self) -> usize {
        1 << self.width
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn mul(&self, mut a: u32, mut b: u32) -> u32 {
        let mut acc = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.width & 1 == 1 {
                a ^= self.modulus;
            }
        }
        acc
    }

    pub fn pow(&self, a: u32, e: u32) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }
}

/// A multiset of `±1` vectors whose every `k` coordinates are jointly
/// uniform.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KWiseSpace {
    pub n: usize,
    pub k: usize,
    /// Row-major `size × n` signs.
    pub vectors: Vec<Vec<i8>>,
}

impl KWiseSpace {
    pub fn size(&self) -> usize {
        self.vectors.len()
    }
}

/// Column `i` gets the code word `(1, α_i, α_i^3, …, α_i^{k-1})` over the
/// smallest binary field with at least `n` elements, `α_i = i`. Each seed
/// `s` yields the vector of parities `(-1)^{⟨s, code_i⟩}`, giving
/// `2·(2^w)^{k/2}` vectors in all.
pub fn kwise_space(n: usize, k: usize) -> Result<KWiseSpace> {
    if k == 0 || k % 2 != 0 {
        return Err(Error::domain(format!(
            "k must be a positive even integer, got {k}"
        )));
    }
    if k > MAX_K {
        return Err(Error::resource(format!("k is limited to {MAX_K}, got {k}")));
    }
    if n == 0 {
        return Err(Error::domain("k-wise space needs n >= 1"));
    }
    let width = (usize::BITS - (n - 1).leading_zeros()).max(1);
    if width > MAX_FIELD_WIDTH {
        return Err(Error::resource(format!(
            "n = {n} needs a field wider than {MAX_FIELD_WIDTH} bits"
        )));
    }
    let field = BinaryField::new(width)?;
    let half = k / 2;
    let bits = 1 + half * width as usize;
    if bits > MAX_SPACE_SIZE.trailing_zeros() as usize {
        return Err(Error::resource(format!(
            "k-wise space of 2^{bits} vectors exceeds the cap"
        )));
    }
    let codes: Vec<u64> = (0..n as u32)
        .map(|a| {
            let mut code = 1u64;
            for t in 0..half {
                let e = field.pow(a, 2 * t as u32 + 1) as u64;
                code |= e << (1 + t * width as usize);
            }
            code
        })
        .collect();
    let vectors = (0..1u64 << bits)
        .map(|s| {
            codes
                .iter()
                .map(|&c| if (s & c).count_ones() % 2 == 1 { -1 } else { 1 })
                .collect()
        })
        .collect();
    Ok(KWiseSpace { n, k, vectors })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KWiseCheck {
    pub subsets_checked: usize,
    pub exhaustive: bool,
    /// Largest `|count − size/2^t|` over all checked cells.
    pub max_cell_error: usize,
}

impl KWiseCheck {
    pub fn passed(&self) -> bool {
        self.max_cell_error == 0
    }
}

/// Counts sign patterns on coordinate subsets of size at most `k`; all
/// subsets when `n` is at most 10, a seeded sample of them otherwise.
pub fn check_kwise_uniform(space: &KWiseSpace, k: usize, seed: u64) -> Result<KWiseCheck> {
    let n = space.n;
    let size = space.size();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let exhaustive = n <= EXHAUSTIVE_CHECK_DIM;
    for t in 1..=k.min(n) {
        if exhaustive {
            subsets.extend(combinations(n, t));
        } else {
            let mut rng = seeded_rng(sub_seed(seed, t as u64));
            for _ in 0..SAMPLED_SUBSETS {
                let mut s = sample(&mut rng, n, t).into_vec();
                s.sort_unstable();
                subsets.push(s);
            }
        }
    }
    let mut max_cell_error = 0;
    for s in &subsets {
        let cells = 1usize << s.len();
        if size % cells != 0 {
            max_cell_error = max_cell_error.max(size);
            continue;
        }
        let mut counts = vec![0usize; cells];
        for v in &space.vectors {
            let idx = s
                .iter()
                .enumerate()
                .fold(0, |acc, (b, &i)| acc | usize::from(v[i] < 0) << b);
            counts[idx] += 1;
        }
        let expect = size / cells;
        for c in counts {
            max_cell_error = max_cell_error.max(c.abs_diff(expect));
        }
    }
    Ok(KWiseCheck {
        subsets_checked: subsets.len(),
        exhaustive,
        max_cell_error,
    })
}

fn combinations(n: usize, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..t).collect();
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..t).rev().find(|&i| cur[i] < n - t + i) else {
            return out;
        };
        cur[pos] += 1;
        for j in pos + 1..t {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The matrix whose rows are the vectors of `kwise_space(n, q)`, for which
/// `‖Bx‖_q^q = m·E⟨R, x⟩^q` holds exactly.
pub fn derandomized_embedding<T: Scalar>(n: usize, q: usize) -> Result<DenseMatrix<T>> {
    let space = kwise_space(n, q)?;
    let m = space.size();
    DenseMatrix::new(
        m,
        n,
        space
            .vectors
            .iter()
            .flatten()
            .map(|&s| T::of(f64::from(s)))
            .collect(),
    )
}
