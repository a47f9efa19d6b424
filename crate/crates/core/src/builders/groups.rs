//! Small finite groups given by multiplication tables.

use crate::error::{structural, Result};

/// A finite group on `0..order` with identity `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a table: closure, associativity, identity `0`, inverses.
    pub fn from_table(names: Vec<String>, mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0
            || mul.len() != n
            || mul
                .iter()
                .any(|r| r.len() != n || r.iter().any(|&v| v >= n))
        {
            return Err(structural("group table has wrong shape"));
        }
        if (0..n).any(|a| mul[0][a] != a || mul[a][0] != a) {
            return Err(structural("element 0 is not an identity"));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(structural("group table is not associative"));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == 0 && mul[b][a] == 0) {
                Some(b) => inv.push(b),
                None => return Err(structural(format!("element {} has no inverse", names[a]))),
            }
        }
        Ok(FiniteGroup { names, mul, inv })
    }

    fn from_fn(names: Vec<String>, f: impl Fn(usize, usize) -> usize) -> Self {
        let n = names.len();
        let mul = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
        Self::from_table(names, mul).expect("generated table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let names = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g{i}"),
            })
            .collect();
        Self::from_fn(names, |a, b| (a + b) % n)
    }

    /// Klein four-group with elements `1, a, b, ab`.
    pub fn klein() -> Self {
        Self::from_fn(
            ["1", "a", "b", "ab"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            |x, y| x ^ y,
        )
    }

    /// Dihedral group of order `2n`; element `i + n*j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Self {
        let names = (0..2 * n)
            .map(|k| {
                let (i, j) = (k % n, k / n);
                match (i, j) {
                    (0, 0) => "1".to_string(),
                    (0, 1) => "s".to_string(),
                    (i, 0) => format!("r{i}"),
                    (i, _) => format!("r{i}s"),
                }
            })
            .collect();
        Self::from_fn(names, |a, b| {
            let (i, j) = (a % n, a / n);
            let (k, l) = (b % n, b / n);
            let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            rot + n * ((j + l) % 2)
        })
    }

    pub fn symmetric3() -> Self {
        Self::dihedral(3)
    }

    /// Quaternion group; index `4*s + u` is `(-1)^s · u` for `u` in `1, i, j, k`.
    pub fn quaternion() -> Self {
        // unit products as (sign, unit)
        const T: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let units = ["1", "i", "j", "k"];
        let names = (0..8)
            .map(|x| {
                if x < 4 {
                    units[x].to_string()
                } else {
                    format!("-{}", units[x - 4])
                }
            })
            .collect();
        Self::from_fn(names, |a, b| {
            let (s, t) = T[a % 4][b % 4];
            let sign = (a / 4 + b / 4 + s) % 2;
            4 * sign + t
        })
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let nb = b.order();
        let names = (0..a.order() * nb)
            .map(|k| {
                let (x, y) = (k / nb, k % nb);
                if k == 0 {
                    "1".to_string()
                } else {
                    format!("({},{})", a.name(x), b.name(y))
                }
            })
            .collect();
        Self::from_fn(names, |p, q| {
            a.mul(p / nb, q / nb) * nb + b.mul(p % nb, q % nb)
        })
    }

    /// All groups of order at most 8 used by the generators, up to isomorphism
    /// apart from the trivial one.
    pub fn small_catalogue() -> Vec<FiniteGroup> {
        vec![
            Self::trivial(),
            Self::cyclic(2),
            Self::cyclic(3),
            Self::cyclic(4),
            Self::klein(),
            Self::cyclic(5),
            Self::cyclic(6),
            Self::symmetric3(),
            Self::cyclic(7),
            Self::cyclic(8),
            Self::direct_product(&Self::cyclic(2), &Self::cyclic(4)),
            Self::direct_product(&Self::klein(), &Self::cyclic(2)),
            Self::dihedral(4),
            Self::quaternion(),
        ]
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.order() {
            return Err(structural("name count differs from group order"));
        }
        self.names = names;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    /// Sorted subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut list = vec![0];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.order()];
        for &x in set {
            inside[x] = true;
        }
        inside[0]
            && set
                .iter()
                .all(|&x| inside[self.inv(x)] && set.iter().all(|&y| inside[self.mul(x, y)]))
    }

    pub fn is_normal(&self, set: &[usize]) -> bool {
        let mut inside = vec![false; self.order()];
        for &x in set {
            inside[x] = true;
        }
        self.is_subgroup(set)
            && (0..self.order()).all(|g| {
                set.iter()
                    .all(|&n| inside[self.mul(self.mul(self.inv(g), n), g)])
            })
    }

    /// Every subgroup, each sorted, listed without repetition.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut out: Vec<Vec<usize>> = Vec::new();
        let mut frontier = vec![vec![0usize]];
        out.push(vec![0]);
        // close under adding one generator at a time
        while let Some(h) = frontier.pop() {
            for g in 0..n {
                if h.binary_search(&g).is_ok() {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.generated(&gens);
                if !out.contains(&k) {
                    out.push(k.clone());
                    frontier.push(k);
                }
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        self.subgroups()
            .into_iter()
            .filter(|h| self.is_normal(h))
            .collect()
    }

    /// The subgroup on `set` as a group of its own, with the embedding table.
    pub fn subgroup(&self, set: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(set) {
            return Err(structural("not a subgroup"));
        }
        let mut elems = set.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let pos = |g: usize| elems.binary_search(&g).expect("closed under products");
        let names = elems.iter().map(|&g| self.name(g).to_string()).collect();
        let sub = FiniteGroup::from_fn(names, |a, b| pos(self.mul(elems[a], elems[b])));
        Ok((sub, elems))
    }

    /// Quotient by a normal subgroup with the projection table.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_normal(normal) {
            return Err(structural("quotient by a non-normal subgroup"));
        }
        let n = self.order();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if class[g] == usize::MAX {
                for &k in normal {
                    class[self.mul(g, k)] = reps.len();
                }
                reps.push(g);
            }
        }
        let names = reps
            .iter()
            .map(|&r| {
                if r == 0 {
                    "1".to_string()
                } else {
                    format!("{}N", self.name(r))
                }
            })
            .collect();
        let q = FiniteGroup::from_fn(names, |a, b| class[self.mul(reps[a], reps[b])]);
        Ok((q, class))
    }

    pub fn is_homomorphism(&self, to: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order()
            && map.iter().all(|&v| v < to.order())
            && (0..self.order())
                .all(|a| (0..self.order()).all(|b| map[self.mul(a, b)] == to.mul(map[a], map[b])))
    }

    pub fn identity_map(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }

    /// A small generating set, chosen greedily.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut h = vec![0];
        for g in 0..self.order() {
            if h.binary_search(&g).is_err() {
                gens.push(g);
                h = self.generated(&gens);
            }
        }
        gens
    }

    /// All homomorphisms into `to`, by assigning generator images.
    pub fn homomorphisms(&self, to: &FiniteGroup) -> Vec<Vec<usize>> {
        let gens = self.generators();
        let mut out = Vec::new();
        let mut images = vec![0; gens.len()];
        loop {
            if let Some(map) = self.extend_generators(to, &gens, &images) {
                out.push(map);
            }
            let mut i = 0;
            loop {
                if i == images.len() {
                    out.sort();
                    return out;
                }
                images[i] += 1;
                if images[i] < to.order() {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }

    fn extend_generators(
        &self,
        to: &FiniteGroup,
        gens: &[usize],
        images: &[usize],
    ) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order()];
        map[0] = 0;
        let mut queue = vec![0];
        while let Some(x) = queue.pop() {
            for (k, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                let v = to.mul(map[x], images[k]);
                if map[y] == usize::MAX {
                    map[y] = v;
                    queue.push(y);
                } else if map[y] != v {
                    return None;
                }
            }
        }
        self.is_homomorphism(to, &map).then_some(map)
    }
}
