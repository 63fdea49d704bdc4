//! Adjusted Rand Index and the sample similarity matrix.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};

/// Symmetric `n x n` matrix of pairwise partition similarities, unit diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Validates symmetry, a unit diagonal, and entries `<= 1`.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "expected {} entries, got {}",
                n * n,
                values.len()
            )));
        }
        for i in 0..n {
            if values[i * n + i] != 1.0 {
                return Err(Error::Invalid(format!("diagonal entry {} is not 1", i + 1)));
            }
            for j in 0..n {
                let v = values[i * n + j];
                if !v.is_finite() || v > 1.0 {
                    return Err(Error::Invalid(format!(
                        "entry ({}, {}) = {v} is not a similarity",
                        i + 1,
                        j + 1
                    )));
                }
                if v != values[j * n + i] {
                    return Err(Error::Invalid(format!(
                        "matrix not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { n, values })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn choose2(x: u64) -> i128 {
    let x = x as i128;
    x * (x - 1) / 2
}

/// Adjusted Rand Index (Hubert-Arabie).
///
/// The value is formed from exact integer pair counts, so equal indices are
/// bit-identical. When the denominator vanishes (both partitions all
/// singletons, or both a single block) the result is 1 for identical
/// partitions and 0 otherwise.
pub fn ari(p: &Partition, q: &Partition) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    let n = p.len() as u64;
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&a, &b) in p.assignment().iter().zip(q.assignment()) {
        *table.entry((a, b)).or_default() += 1;
        *rows.entry(a).or_default() += 1;
        *cols.entry(b).or_default() += 1;
    }
    let index: i128 = table.values().map(|&c| choose2(c)).sum();
    let sum_a: i128 = rows.values().map(|&c| choose2(c)).sum();
    let sum_b: i128 = cols.values().map(|&c| choose2(c)).sum();
    let pairs = choose2(n);

    // ARI = (index - sa*sb/N) / ((sa+sb)/2 - sa*sb/N), scaled by 2N
    let numerator = 2 * (index * pairs - sum_a * sum_b);
    let denominator = (sum_a + sum_b) * pairs - 2 * sum_a * sum_b;
    if denominator == 0 {
        return Ok(if p == q { 1.0 } else { 0.0 });
    }
    Ok(numerator as f64 / denominator as f64)
}

/// Pairwise ARI over a list of partitions.
pub fn similarity_matrix(partitions: &[Partition]) -> Result<SimilarityMatrix> {
    let n = partitions.len();
    if n < 2 {
        return Err(Error::TooFewNetworks { min: 2, got: n });
    }
    let k = partitions[0].len();
    if let Some(bad) = partitions.iter().find(|p| p.len() != k) {
        return Err(Error::InconsistentNodeCount {
            expected: k,
            found: bad.len(),
        });
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| ari(&partitions[i], &partitions[j]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut values = vec![1.0; n * n];
    for (i, row) in rows.iter().enumerate() {
        for (offset, &v) in row.iter().enumerate() {
            let j = i + 1 + offset;
            values[i * n + j] = v;
            values[j * n + i] = v;
        }
    }
    Ok(SimilarityMatrix { n, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(labels: &[usize]) -> Partition {
        Partition::from_labels(labels)
    }

    #[test]
    fn identical_partitions_score_one() {
        for labels in [
            &[1, 1, 2, 2][..],
            &[1, 2, 3, 4],
            &[1, 1, 1, 1],
            &[1, 2, 1, 3, 3],
        ] {
            assert_eq!(ari(&part(labels), &part(labels)).unwrap(), 1.0);
        }
    }

    #[test]
    fn crossed_halves_score_minus_half() {
        assert_eq!(
            ari(&part(&[1, 1, 2, 2]), &part(&[1, 2, 1, 2])).unwrap(),
            -0.5
        );
    }

    #[test]
    fn block_versus_singletons_scores_zero() {
        assert_eq!(
            ari(&Partition::single_block(4), &Partition::singletons(4)).unwrap(),
            0.0
        );
    }

    #[test]
    fn relabeling_is_invisible() {
        let a = ari(&part(&[1, 1, 2, 3, 3]), &part(&[1, 2, 2, 3, 3])).unwrap();
        let b = ari(&part(&[9, 9, 4, 5, 5]), &part(&[6, 8, 8, 2, 2])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            ari(&part(&[1, 2]), &part(&[1, 2, 3])),
            Err(Error::LengthMismatch(2, 3))
        ));
    }

    #[test]
    fn matrix_examples() {
        let same = vec![part(&[1, 1, 2, 2]); 3];
        let m = similarity_matrix(&same).unwrap();
        assert!(m.values().iter().all(|&v| v == 1.0));

        let m = similarity_matrix(&[part(&[1, 1, 2, 2]), part(&[1, 2, 1, 2])]).unwrap();
        assert_eq!(m.get(0, 1), -0.5);
        assert_eq!(m.get(1, 0), -0.5);
        assert_eq!(m.get(0, 0), 1.0);

        assert!(matches!(
            similarity_matrix(&[part(&[1])]),
            Err(Error::TooFewNetworks { .. })
        ));
        assert!(matches!(
            similarity_matrix(&[part(&[1, 2]), part(&[1, 2, 3])]),
            Err(Error::InconsistentNodeCount { .. })
        ));
    }
}
