//! Shannon entropy and information gain over label multisets.

use crate::error::{Error, Result};

/// Entropy in bits of a vector of class counts. Zero counts contribute nothing.
pub fn entropy_from_counts(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

fn counts_of(labels: &[usize], k: usize) -> Vec<usize> {
    let mut counts = vec![0; k];
    for &l in labels {
        counts[l] += 1;
    }
    counts
}

fn n_classes(groups: &[&[usize]]) -> usize {
    groups
        .iter()
        .flat_map(|g| g.iter())
        .max()
        .map_or(0, |&m| m + 1)
}

/// Shannon entropy (bits) of a label sequence.
pub fn entropy(labels: &[usize]) -> Result<f64> {
    if labels.is_empty() {
        return Err(Error::Empty("entropy of an empty label sequence".into()));
    }
    Ok(entropy_from_counts(&counts_of(labels, n_classes(&[labels]))))
}

/// `H(parent) − |pos|/t·H(pos) − |neg|/t·H(neg)` from class counts.
pub fn gain_from_counts(parent: &[usize], pos: &[usize]) -> f64 {
    let t: usize = parent.iter().sum();
    let neg: Vec<usize> = parent.iter().zip(pos).map(|(p, q)| p - q).collect();
    let n_pos: usize = pos.iter().sum();
    let n_neg = t - n_pos;
    let t = t as f64;
    let weighted = n_pos as f64 / t * entropy_from_counts(pos) + n_neg as f64 / t * entropy_from_counts(&neg);
    // exact splits can leave a tiny negative residue
    (entropy_from_counts(parent) - weighted).max(0.0)
}

/// Information gain of splitting `parent` into `pos` and `neg`.
///
/// `pos ∪ neg` must equal `parent` as a multiset; either side may be empty.
pub fn information_gain(parent: &[usize], pos: &[usize], neg: &[usize]) -> Result<f64> {
    if parent.is_empty() {
        return Err(Error::Empty("information gain of an empty parent".into()));
    }
    let k = n_classes(&[parent, pos, neg]);
    let pc = counts_of(parent, k);
    let qc = counts_of(pos, k);
    let nc = counts_of(neg, k);
    if pc.iter().zip(qc.iter().zip(&nc)).any(|(p, (q, n))| *p != q + n) {
        return Err(Error::MultisetMismatch);
    }
    Ok(gain_from_counts(&pc, &qc))
}
