//! Finite groups of unitary matrices.
//!
//! Closure identifies matrices through [`ElemKey`] plus an exact distance
//! check. Every structural query afterwards runs on the integer
//! multiplication table. Subgroups are sorted index lists into the parent.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::cxla::{CMat, Tol};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ORDER: usize = 8192;

/// Hash key of a matrix: entries on a 1e-6 grid, stored as integers so that
/// `-0.0` and `0.0` coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElemKey(Vec<i64>);

impl ElemKey {
    pub fn of(m: &CMat) -> Self {
        let q = |x: f64| (x * 1e6).round() as i64;
        ElemKey(m.data().iter().flat_map(|z| [q(z.re), q(z.im)]).collect())
    }
}

#[derive(Clone, Debug)]
pub struct FinMatGroup {
    dim: usize,
    elements: Vec<CMat>,
    mul: Vec<u32>,
    inv: Vec<usize>,
}

/// Order, sorted class sizes and element-order histogram. A sanity check, not
/// an isomorphism certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    pub order: usize,
    pub class_sizes: Vec<usize>,
    pub element_orders: BTreeMap<usize, usize>,
}

impl std::fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let orders: Vec<String> = self
            .element_orders
            .iter()
            .map(|(o, c)| format!("{o}:{c}"))
            .collect();
        write!(
            f,
            "order {} | {} classes {:?} | element orders {{{}}}",
            self.order,
            self.class_sizes.len(),
            self.class_sizes,
            orders.join(", ")
        )
    }
}

impl FinMatGroup {
    /// Multiplicative closure of `generators`, identity first, then breadth-first
    /// order of discovery.
    pub fn close(generators: &[CMat], max_order: usize, tol: Tol) -> Result<Self> {
        let dim = match generators.first() {
            Some(g) => g.rows(),
            None => {
                return Err(Error::Domain("closure needs at least one generator".into()));
            }
        };
        for (k, g) in generators.iter().enumerate() {
            if g.rows() != dim || !g.is_square() {
                return Err(Error::Dimension(format!(
                    "generator {k} is {}x{}",
                    g.rows(),
                    g.cols()
                )));
            }
            if !g.is_unitary(tol) {
                return Err(Error::NonUnitary(k));
            }
        }

        let mut elements = vec![CMat::identity(dim)];
        let mut index: HashMap<ElemKey, usize> = HashMap::new();
        index.insert(ElemKey::of(&elements[0]), 0);
        // right[i][k] = index of elements[i] * generators[k]
        let mut right: Vec<Vec<usize>> = Vec::new();
        // parent[i] = (p, k) with elements[i] = elements[p] * generators[k]
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];

        let mut i = 0;
        while i < elements.len() {
            let mut row = Vec::with_capacity(generators.len());
            for (k, g) in generators.iter().enumerate() {
                let prod = &elements[i] * g;
                let key = ElemKey::of(&prod);
                let j = match index.get(&key) {
                    Some(&j) => {
                        let d = elements[j].dist(&prod)?;
                        if d > tol.eq_tol {
                            return Err(Error::NearCollision {
                                a: j,
                                b: elements.len(),
                                dist: d,
                            });
                        }
                        j
                    }
                    None => {
                        if elements.len() >= max_order {
                            return Err(Error::ClosureOverflow(max_order));
                        }
                        let j = elements.len();
                        index.insert(key, j);
                        elements.push(prod);
                        parent.push(Some((i, k)));
                        j
                    }
                };
                row.push(j);
            }
            right.push(row);
            i += 1;
        }

        check_separation(&elements, tol)?;

        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        // Fill column b from its parent column: a*b = (a*p)*g_k.
        for a in 0..n {
            mul[a * n] = a as u32;
        }
        for b in 1..n {
            let (p, k) = parent[b].expect("non-identity element has a parent");
            for a in 0..n {
                let ap = mul[a * n + p] as usize;
                mul[a * n + b] = right[ap][k] as u32;
            }
        }
        FinMatGroup::assemble(dim, elements, mul)
    }

    /// Builds a group from precomputed elements and table, validating the
    /// group axioms on the table.
    pub fn from_parts(dim: usize, elements: Vec<CMat>, mul: Vec<u32>) -> Result<Self> {
        let n = elements.len();
        if mul.len() != n * n {
            return Err(Error::Dimension(format!(
                "table of {} entries for {n} elements",
                mul.len()
            )));
        }
        if elements.iter().any(|e| e.rows() != dim || !e.is_square()) {
            return Err(Error::Dimension("element of wrong shape".into()));
        }
        FinMatGroup::assemble(dim, elements, mul)
    }

    fn assemble(dim: usize, elements: Vec<CMat>, mul: Vec<u32>) -> Result<Self> {
        let n = elements.len();
        let mut seen = vec![0usize; n];
        for a in 0..n {
            if mul[a * n] as usize != a || mul[a] as usize != a {
                return Err(Error::Domain(
                    "element 0 is not the identity of the table".into(),
                ));
            }
        }
        for (r, stamp) in (0..n).zip(1..) {
            for c in 0..n {
                let v = mul[r * n + c] as usize;
                if v >= n || seen[v] == stamp {
                    return Err(Error::Domain(format!(
                        "row {r} of the table is not a permutation"
                    )));
                }
                seen[v] = stamp;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for (c, stamp) in (0..n).zip(1..) {
            for r in 0..n {
                let v = mul[r * n + c] as usize;
                if seen[v] == stamp {
                    return Err(Error::Domain(format!(
                        "column {c} of the table is not a permutation"
                    )));
                }
                seen[v] = stamp;
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| mul[a * n + b] == 0)
                .expect("Latin square has an inverse");
        }
        Ok(FinMatGroup {
            dim,
            elements,
            mul,
            inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &CMat {
        &self.elements[i]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `h * s * h⁻¹`
    #[inline]
    pub fn conj(&self, h: usize, s: usize) -> usize {
        self.mul(self.mul(h, s), self.inv(h))
    }

    #[inline]
    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Index of the element equal to `m` within `eq_tol`, by linear scan.
    pub fn find(&self, m: &CMat, tol: Tol) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e.approx_eq(m, tol.eq_tol))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.order()).collect()
    }

    fn check_indices(&self, sub: &[usize]) -> Result<()> {
        match sub.iter().find(|&&s| s >= self.order()) {
            Some(&s) => Err(Error::BadIndex(s)),
            None => Ok(()),
        }
    }

    pub fn is_closed(&self, sub: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &s in sub {
            match member.get_mut(s) {
                Some(m) => *m = true,
                None => return false,
            }
        }
        !sub.is_empty()
            && sub
                .iter()
                .all(|&a| sub.iter().all(|&b| member[self.mul(a, b)]))
    }

    /// Sorted indices of the elements commuting with every element of `sub`.
    pub fn centralizer(&self, sub: &[usize]) -> Result<Vec<usize>> {
        self.check_indices(sub)?;
        Ok((0..self.order())
            .filter(|&x| sub.iter().all(|&s| self.commute(x, s)))
            .collect())
    }

    pub fn center(&self) -> Vec<usize> {
        let all = self.all();
        self.centralizer(&all).expect("indices are valid")
    }

    pub fn is_normal(&self, sub: &[usize]) -> Result<bool> {
        self.check_indices(sub)?;
        if !self.is_closed(sub) {
            return Err(Error::NotClosed);
        }
        let member = self.membership(sub);
        Ok((0..self.order()).all(|x| sub.iter().all(|&s| member[self.conj(x, s)])))
    }

    pub fn is_abelian(&self, sub: &[usize]) -> bool {
        sub.iter()
            .enumerate()
            .all(|(i, &a)| sub[i + 1..].iter().all(|&b| self.commute(a, b)))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for a in 0..n {
            if class_of[a] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class = Vec::new();
            for x in 0..n {
                let c = self.conj(x, a);
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    class.push(c);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// Smallest subgroup containing the generators, sorted.
    pub fn subgroup_from(&self, gens: &[usize]) -> Result<Vec<usize>> {
        self.check_indices(gens)?;
        let mut member = vec![false; self.order()];
        member[0] = true;
        let mut out = vec![0];
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Every normal subgroup, found by adjoining whole conjugacy classes.
    /// Sorted by order, then lexicographically.
    pub fn normal_subgroups(&self) -> Vec<Vec<usize>> {
        let classes = self.conjugacy_classes();
        let mut found: Vec<Vec<usize>> = vec![vec![0]];
        let mut seen: std::collections::HashSet<Vec<usize>> = found.iter().cloned().collect();
        let mut i = 0;
        while i < found.len() {
            let base = found[i].clone();
            let member = self.membership(&base);
            for class in &classes {
                if member[class[0]] {
                    continue;
                }
                let mut gens = base.clone();
                gens.extend_from_slice(class);
                let sub = self.subgroup_from(&gens).expect("indices are valid");
                if seen.insert(sub.clone()) {
                    found.push(sub);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
    }

    /// Left cosets `gH` of a subgroup, each sorted, ordered by smallest member.
    pub fn left_cosets(&self, sub: &[usize]) -> Result<Vec<Vec<usize>>> {
        if !self.is_closed(sub) {
            return Err(Error::NotClosed);
        }
        let mut assigned = vec![false; self.order()];
        let mut cosets = Vec::new();
        for g in 0..self.order() {
            if assigned[g] {
                continue;
            }
            let mut c: Vec<usize> = sub.iter().map(|&h| self.mul(g, h)).collect();
            c.sort_unstable();
            c.iter().for_each(|&x| assigned[x] = true);
            cosets.push(c);
        }
        Ok(cosets)
    }

    pub fn fingerprint(&self, sub: &[usize]) -> Result<Fingerprint> {
        if !self.is_closed(sub) {
            return Err(Error::NotClosed);
        }
        let member = self.membership(sub);
        let mut done = vec![false; self.order()];
        let mut class_sizes = Vec::new();
        for &a in sub {
            if done[a] {
                continue;
            }
            let mut size = 0;
            for &x in sub {
                let c = self.conj(x, a);
                debug_assert!(member[c]);
                if !done[c] {
                    done[c] = true;
                    size += 1;
                }
            }
            class_sizes.push(size);
        }
        class_sizes.sort_unstable();
        let mut element_orders = BTreeMap::new();
        for &a in sub {
            *element_orders.entry(self.element_order(a)).or_insert(0) += 1;
        }
        Ok(Fingerprint {
            order: sub.len(),
            class_sizes,
            element_orders,
        })
    }

    pub fn membership(&self, sub: &[usize]) -> Vec<bool> {
        let mut m = vec![false; self.order()];
        sub.iter().for_each(|&s| m[s] = true);
        m
    }
}

/// Fails if two elements are closer than the guard band.
fn check_separation(elements: &[CMat], tol: Tol) -> Result<()> {
    let guard = 10.0 * tol.eq_tol;
    for a in 0..elements.len() {
        let ea = elements[a].data();
        'pair: for (b, eb) in elements.iter().enumerate().skip(a + 1) {
            let mut worst = 0.0f64;
            for (x, y) in ea.iter().zip(eb.data()) {
                worst = worst.max((x - y).norm());
                if worst > guard {
                    continue 'pair;
                }
            }
            return Err(Error::NearCollision { a, b, dist: worst });
        }
    }
    Ok(())
}
