use serde::Serialize;

/// Default distance below which two ordinates are treated as the same zero.
pub const DEFAULT_RESOLUTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ordinate {
    pub gamma: f64,
    pub multiplicity: u32,
}

/// The multiset Γ of real ordinates, sorted, with near-duplicates merged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrdinateMultiset {
    ordinates: Vec<Ordinate>,
    #[serde(skip)]
    resolution: f64,
}

impl Default for OrdinateMultiset {
    fn default() -> Self {
        Self::new()
    }
}

impl OrdinateMultiset {
    pub fn new() -> Self {
        Self::with_resolution(DEFAULT_RESOLUTION)
    }

    pub fn with_resolution(resolution: f64) -> Self {
        Self {
            ordinates: Vec::new(),
            resolution,
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, u32)>) -> Self {
        let mut out = Self::new();
        for (g, k) in pairs {
            out.insert(g, k);
        }
        out
    }

    /// Each listed ordinate counts once; repeats raise the multiplicity.
    pub fn from_ordinates(gammas: &[f64]) -> Self {
        Self::from_pairs(gammas.iter().map(|&g| (g, 1)))
    }

    pub fn insert(&mut self, gamma: f64, multiplicity: u32) {
        if multiplicity == 0 {
            return;
        }
        if let Some(o) = self
            .ordinates
            .iter_mut()
            .find(|o| (o.gamma - gamma).abs() < self.resolution)
        {
            o.multiplicity += multiplicity;
            return;
        }
        let at = self.ordinates.partition_point(|o| o.gamma < gamma);
        self.ordinates.insert(at, Ordinate { gamma, multiplicity });
    }

    pub fn ordinates(&self) -> &[Ordinate] {
        &self.ordinates
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.ordinates.iter().map(|o| o.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Ordinates repeated according to multiplicity.
    pub fn expanded(&self) -> impl Iterator<Item = f64> + '_ {
        self.ordinates
            .iter()
            .flat_map(|o| std::iter::repeat(o.gamma).take(o.multiplicity as usize))
    }

    /// True when both multisets have the same multiplicities and every
    /// ordinate lies within `tol` of its counterpart.
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        self.ordinates.len() == other.ordinates.len()
            && self
                .ordinates
                .iter()
                .zip(&other.ordinates)
                .all(|(a, b)| a.multiplicity == b.multiplicity && (a.gamma - b.gamma).abs() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_sorts() {
        let mut g = OrdinateMultiset::new();
        g.insert(1.0, 1);
        g.insert(-2.0, 1);
        g.insert(1.0 + 1e-9, 2);
        assert_eq!(g.ordinates().len(), 2);
        assert_eq!(g.ordinates()[0].gamma, -2.0);
        assert_eq!(g.ordinates()[1].multiplicity, 3);
        assert_eq!(g.total_multiplicity(), 4);
        assert_eq!(g.expanded().count(), 4);
    }

    #[test]
    fn matching() {
        let a = OrdinateMultiset::from_ordinates(&[0.0, 1.0]);
        let b = OrdinateMultiset::from_ordinates(&[0.01, 0.995]);
        assert!(a.matches(&b, 0.02));
        assert!(!a.matches(&b, 0.001));
        assert!(!a.matches(&OrdinateMultiset::from_pairs([(0.0, 2)]), 0.02));
    }
}
