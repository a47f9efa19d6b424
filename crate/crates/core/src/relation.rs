use fixedbitset::FixedBitSet;

/// Dense square boolean matrix; row `i` holds every `j` with `i R j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<FixedBitSet>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        BitMatrix {
            rows: (0..n).map(|_| FixedBitSet::with_capacity(n)).collect(),
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.rows[i].insert(j);
                }
            }
        }
        m
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.rows[i].insert(j);
    }

    pub fn row(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }

    pub fn transpose(&self) -> BitMatrix {
        let n = self.len();
        let mut t = BitMatrix::new(n);
        for i in 0..n {
            for j in self.rows[i].ones() {
                t.rows[j].insert(i);
            }
        }
        t
    }

    /// Reflexive-transitive closure (Warshall over bit rows).
    pub fn reflexive_transitive_closure(&self) -> BitMatrix {
        let n = self.len();
        let mut m = self.clone();
        for i in 0..n {
            m.rows[i].insert(i);
        }
        for k in 0..n {
            let rk = m.rows[k].clone();
            for i in 0..n {
                if m.rows[i].contains(k) {
                    m.rows[i].union_with(&rk);
                }
            }
        }
        m
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.ones().map(move |j| (i, j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_chain() {
        let mut m = BitMatrix::new(3);
        m.set(0, 1);
        m.set(1, 2);
        let c = m.reflexive_transitive_closure();
        assert!(c.get(0, 2) && c.get(2, 2) && !c.get(2, 0));
        assert_eq!(c.pairs().count(), 6);
    }
}
