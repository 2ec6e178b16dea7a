//! Binary linear codes given by a full-rank generator matrix.

use crate::error::{Error, Result};
use crate::gf2::{rank, BitVec};

/// A `k x n` generator matrix over GF(2).
///
/// Rows generate the code; columns are cached for recovery-set work, where
/// everything is phrased as "which columns sum to a unit vector".
#[derive(Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    k: usize,
    n: usize,
    rows: Vec<BitVec>,
    cols: Vec<BitVec>,
    systematic: bool,
}

impl GeneratorMatrix {
    /// Builds a matrix from its rows, validating shape and full rank.
    pub fn new(rows: Vec<BitVec>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidInput("matrix needs at least one row".into()));
        }
        let n = rows[0].len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        if k > n {
            return Err(Error::InvalidInput(format!(
                "dimension k = {k} exceeds length n = {n}"
            )));
        }
        if rank(&rows) != k {
            return Err(Error::NotFullRank);
        }
        let cols = (0..n)
            .map(|j| BitVec::from_bits(&rows.iter().map(|r| r.get(j)).collect::<Vec<_>>()))
            .collect::<Vec<_>>();
        let systematic = (0..k).all(|j| cols[j] == BitVec::unit(k, j));
        Ok(GeneratorMatrix {
            k,
            n,
            rows,
            cols,
            systematic,
        })
    }

    /// Builds the systematic matrix `[I | A]` from the parity block `A`
    /// given as one row of parity participation per information symbol.
    pub fn from_parity_block(k: usize, parity_cols: usize, block: &[Vec<usize>]) -> Result<Self> {
        if block.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: block.len(),
            });
        }
        let n = k + parity_cols;
        let mut rows = Vec::with_capacity(k);
        for (i, parities) in block.iter().enumerate() {
            let mut row = BitVec::unit(n, i);
            for &p in parities {
                if p >= parity_cols {
                    return Err(Error::IndexOutOfRange {
                        index: p,
                        bound: parity_cols,
                    });
                }
                row.set(k + p, true);
            }
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn identity(k: usize) -> Self {
        Self::new((0..k).map(|i| BitVec::unit(k, i)).collect()).expect("identity is full rank")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Redundancy `n - k`.
    pub fn rho(&self) -> usize {
        self.n - self.k
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> &BitVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.cols
    }

    /// Encodes `x` as `x * G`.
    pub fn encode(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: x.len(),
            });
        }
        let mut y = BitVec::zeros(self.n);
        for i in 0..self.k {
            if x.get(i) {
                y.xor_with(&self.rows[i]);
            }
        }
        Ok(y)
    }
}

impl std::fmt::Debug for GeneratorMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "GeneratorMatrix {}x{}:", self.k, self.n)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example1_code, simplex_code};

    #[test]
    fn encode_matches_printed_example() {
        let g = example1_code();
        let x = BitVec::from_bits(&[true, false, false, false]);
        let y = g.encode(&x).unwrap();
        assert_eq!(y.to_string(), "10001010");
    }

    #[test]
    fn encode_zero_is_zero() {
        let g = example1_code();
        let y = g.encode(&BitVec::zeros(4)).unwrap();
        assert!(y.is_zero());
    }

    #[test]
    fn encode_simplex_row_combination() {
        // x = (1,1,0) is the XOR of the first two rows of the simplex matrix.
        let g = simplex_code();
        let x = BitVec::from_bits(&[true, true, false]);
        let y = g.encode(&x).unwrap();
        assert_eq!(y.to_string(), "1100110");
    }

    #[test]
    fn encode_rejects_wrong_length() {
        let g = example1_code();
        assert!(matches!(
            g.encode(&BitVec::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_rank_deficient_rows() {
        let rows = vec![
            BitVec::from_bits(&[true, false, true, false]),
            BitVec::from_bits(&[true, false, true, false]),
        ];
        assert!(matches!(
            GeneratorMatrix::new(rows),
            Err(Error::NotFullRank)
        ));
    }

    #[test]
    fn systematic_detection() {
        assert!(example1_code().is_systematic());
        assert!(simplex_code().is_systematic());
        let g = GeneratorMatrix::new(vec![
            BitVec::from_bits(&[false, true, true]),
            BitVec::from_bits(&[true, false, true]),
        ])
        .unwrap();
        assert!(!g.is_systematic());
    }
}
