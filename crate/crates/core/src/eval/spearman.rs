use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A rank correlation, or the reason it does not exist.
#[derive(Debug, Clone, PartialEq)]
pub enum Correlation {
    Defined(f64),
    Undefined(String),
}

impl Correlation {
    /// The coefficient, NaN when undefined.
    pub fn value(&self) -> f64 {
        match self {
            Correlation::Defined(v) => *v,
            Correlation::Undefined(_) => f64::NAN,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Correlation::Defined(_))
    }
}

impl Serialize for Correlation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Correlation::Defined(v) => s.serialize_f64(*v),
            Correlation::Undefined(_) => s.serialize_none(),
        }
    }
}

/// 1-based ranks, ties get the average of the positions they span.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // positions i..j hold equal values
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

fn pearson(a: &[f64], b: &[f64]) -> Correlation {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        let which = if saa == 0.0 { "first" } else { "second" };
        return Correlation::Undefined(format!("{which} ranking has zero variance"));
    }
    // sqrt(x * x) == x exactly, so identical rankings give exactly 1
    Correlation::Defined((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman correlation of paired samples.
pub fn spearman_paired(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::Shape {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            found: x.len(),
        });
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::Param("scores must not be NaN".into()));
    }
    Ok(pearson(&average_ranks(x), &average_ranks(y)))
}

/// Spearman correlation over the keys both mappings share.
pub fn spearman<K: Ord>(x: &BTreeMap<K, f64>, y: &BTreeMap<K, f64>) -> Result<Correlation> {
    let (a, b): (Vec<f64>, Vec<f64>) = x
        .iter()
        .filter_map(|(k, &vx)| y.get(k).map(|&vy| (vx, vy)))
        .unzip();
    spearman_paired(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho(x: &[f64], y: &[f64]) -> f64 {
        spearman_paired(x, y).unwrap().value()
    }

    #[test]
    fn identical_reversed_and_one_swap() {
        assert_eq!(rho(&[3.0, 1.0, 2.0, 9.0], &[3.0, 1.0, 2.0, 9.0]), 1.0);
        assert_eq!(rho(&[1.0, 2.0, 3.0, 4.0], &[4.0, 3.0, 2.0, 1.0]), -1.0);
        assert!((rho(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ties_take_average_ranks() {
        assert_eq!(average_ranks(&[10.0, 20.0, 10.0, 5.0]), vec![2.5, 4.0, 2.5, 1.0]);
    }

    #[test]
    fn constant_input_is_undefined() {
        let c = spearman_paired(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(!c.is_defined());
        assert!(c.value().is_nan());
    }

    #[test]
    fn uses_key_intersection() {
        let x: BTreeMap<&str, f64> = [("a", 1.0), ("b", 2.0), ("c", 3.0), ("z", 0.0)].into();
        let y: BTreeMap<&str, f64> = [("a", 10.0), ("b", 20.0), ("c", 30.0), ("q", 5.0)].into();
        assert_eq!(spearman(&x, &y).unwrap().value(), 1.0);
        let y: BTreeMap<&str, f64> = [("a", 10.0), ("b", 20.0)].into();
        assert!(matches!(
            spearman(&x, &y),
            Err(Error::InsufficientData { needed: 3, found: 2 })
        ));
    }
}
