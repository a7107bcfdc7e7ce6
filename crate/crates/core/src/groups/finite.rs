use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::arith::lcm;
use crate::error::{malformed, Error, Result};

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    mult: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    labels: Option<Vec<String>>,
}

/// Full associativity check up to this order; random triples above it.
const FULL_CHECK_LIMIT: usize = 200;

impl FiniteGroup {
    /// Validates a Cayley table (`table[a][b] = a·b`).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return malformed("empty multiplication table");
        }
        let mut mult = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return malformed(format!("table row {i} has length {} (expected {n})", row.len()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return malformed(format!("table row {i} contains out-of-range entry {bad}"));
            }
            mult.extend_from_slice(row);
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e * n + x] == x && mult[x * n + e] == x))
            .ok_or_else(|| Error::MalformedInput("table has no identity element".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mult[a * n + b] == identity && mult[b * n + a] == identity) {
                Some(b) => inverse[a] = b,
                None => return malformed(format!("element {a} has no inverse")),
            }
        }
        let mut g = FiniteGroup {
            n,
            mult,
            identity,
            inverse,
            generators: Vec::new(),
            labels: None,
        };
        g.check_associative()?;
        g.generators = g.greedy_generators();
        Ok(g)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.n;
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return malformed(format!("associativity fails on ({a}, {b}, {c})"));
            }
            Ok(())
        };
        if n <= FULL_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0x1a55_0c1a);
            for _ in 0..10 * n {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for x in 0..self.n {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.generated(&gens);
            }
        }
        gens
    }

    pub fn with_generators(mut self, gens: Vec<usize>) -> Result<Self> {
        if self.generated(&gens).len() != self.n {
            return malformed("declared generators do not generate the group");
        }
        self.generators = gens;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.n {
            self.labels = Some(labels);
        }
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let mut r = self.identity;
        for _ in 0..k {
            r = self.mul(r, a);
        }
        r
    }

    /// g·h·g⁻¹.
    #[inline]
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inverse[g])
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).fold(1, |acc, g| lcm(acc, self.element_order(g)))
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.n).filter(|&x| seen[x]).collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let set: HashSet<usize> = elems.iter().copied().collect();
        set.contains(&self.identity)
            && elems
                .iter()
                .all(|&a| elems.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    pub fn is_normal(&self, elems: &[usize]) -> bool {
        let set: HashSet<usize> = elems.iter().copied().collect();
        self.generators
            .iter()
            .all(|&g| elems.iter().all(|&h| set.contains(&self.conj(g, h))))
    }

    /// Conjugacy classes, each sorted, ordered by minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes = Vec::new();
        for x in 0..self.n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..self.n).map(|g| self.conj(g, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                class_of[y] = classes.len();
            }
            classes.push(cls);
        }
        classes
    }

    /// The subgroup on `elems` as a group of its own, with the embedding
    /// (new index → old index). The identity becomes index 0.
    pub fn subgroup(&self, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(elems) {
            return malformed("element set is not a subgroup");
        }
        let mut emb: Vec<usize> = elems.to_vec();
        emb.sort_unstable();
        emb.dedup();
        let pos = emb.iter().position(|&x| x == self.identity).unwrap();
        emb.swap(0, pos);
        emb[1..].sort_unstable();
        let mut index = vec![usize::MAX; self.n];
        for (i, &x) in emb.iter().enumerate() {
            index[x] = i;
        }
        let table = emb
            .iter()
            .map(|&a| emb.iter().map(|&b| index[self.mul(a, b)]).collect())
            .collect();
        let mut g = FiniteGroup::from_table(table)?;
        if let Some(labels) = &self.labels {
            g.labels = Some(emb.iter().map(|&x| labels[x].clone()).collect());
        }
        Ok((g, emb))
    }

    /// Subgroups up to conjugacy, built bottom-up from cyclic subgroups by
    /// joins with cyclic subgroups. Sorted by order, then element list.
    pub fn subgroups_up_to_conjugacy(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        if self.n > cap {
            return Err(Error::ResourceLimit {
                what: format!("subgroup enumeration in a group of order {}", self.n),
                cap,
            });
        }
        let mut cyclic: BTreeSet<Vec<usize>> = BTreeSet::new();
        for g in 0..self.n {
            cyclic.insert(self.generated(&[g]));
        }
        let cyclic: Vec<Vec<usize>> = cyclic.into_iter().collect();
        let mut reps: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        for c in &cyclic {
            let canon = self.canonical_conjugate(c);
            if reps.insert(canon.clone()) {
                queue.push_back(canon);
            }
        }
        while let Some(s) = queue.pop_front() {
            for c in &cyclic {
                if c.iter().all(|x| s.binary_search(x).is_ok()) {
                    continue;
                }
                let joined = self.generated_by_subgroups(&s, c);
                let canon = self.canonical_conjugate(&joined);
                if reps.insert(canon.clone()) {
                    queue.push_back(canon);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = reps.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn generated_by_subgroups(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let gens: Vec<usize> = self
            .generators_of(a)
            .into_iter()
            .chain(self.generators_of(b))
            .collect();
        self.generated(&gens)
    }

    /// A small generating set of the subgroup with elements `elems`.
    pub fn generators_of(&self, elems: &[usize]) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for &x in elems {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// Lexicographically least conjugate (as a sorted element list).
    pub fn canonical_conjugate(&self, elems: &[usize]) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        for g in 0..self.n {
            let mut c: Vec<usize> = elems.iter().map(|&h| self.conj(g, h)).collect();
            c.sort_unstable();
            if best.as_ref().map_or(true, |b| c < *b) {
                best = Some(c);
            }
        }
        best.unwrap()
    }

    /// Greedy maximal p-subgroup containing `start` (a p-subgroup); any maximal
    /// p-subgroup is a Sylow subgroup.
    pub fn sylow_containing(&self, p: usize, start: &[usize]) -> Vec<usize> {
        let mut cur = self.generated(start);
        let is_p_power = |k: usize| crate::arith::is_power_of(k, p);
        for g in 0..self.n {
            if cur.binary_search(&g).is_ok() || !is_p_power(self.element_order(g)) {
                continue;
            }
            let mut gens = self.generators_of(&cur);
            gens.push(g);
            let cand = self.generated(&gens);
            if is_p_power(cand.len()) {
                cur = cand;
            }
        }
        cur
    }
}

/// ℤ/n.
pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    abelian(&[n])
}

/// ℤ/n₁ × … × ℤ/n_k, elements in mixed radix (first factor fastest).
pub fn abelian(orders: &[usize]) -> Result<FiniteGroup> {
    semidirect(orders, &[], &[])
}

fn radix_decode(mut x: usize, orders: &[usize]) -> Vec<usize> {
    orders
        .iter()
        .map(|&o| {
            let d = x % o;
            x /= o;
            d
        })
        .collect()
}

fn radix_encode(v: &[usize], orders: &[usize]) -> usize {
    v.iter()
        .zip(orders)
        .rev()
        .fold(0, |acc, (&d, &o)| acc * o + d % o)
}

/// Apply an integer matrix to an exponent vector (column convention:
/// `out_i = Σ_j m[i][j]·v_j`), reducing modulo `orders`.
fn apply_matrix(m: &[Vec<i64>], v: &[usize], orders: &[usize]) -> Vec<usize> {
    (0..orders.len())
        .map(|i| {
            let s: i64 = m[i].iter().zip(v).map(|(&a, &x)| a * x as i64).sum();
            s.rem_euclid(orders[i] as i64) as usize
        })
        .collect()
}

/// N ⋊ C for abelian N = ∏ ℤ/nᵢ and C = ∏ ℤ/cⱼ, with the j-th generator of C
/// acting on N by the integer matrix `twists[j]` (column convention). An
/// empty `twists` means the direct product. Elements are (n, c) encoded as
/// `n + |N|·c`; generators are the unit vectors of N followed by those of C.
pub fn semidirect(normal: &[usize], complement: &[usize], twists: &[Vec<Vec<i64>>]) -> Result<FiniteGroup> {
    let k = normal.len();
    if normal.iter().chain(complement).any(|&o| o == 0) {
        return malformed("cyclic factor of order 0");
    }
    if !twists.is_empty() && twists.len() != complement.len() {
        return malformed(format!(
            "{} twist matrices for {} complement generators",
            twists.len(),
            complement.len()
        ));
    }
    for t in twists {
        if t.len() != k || t.iter().any(|r| r.len() != k) {
            return malformed(format!("twist matrices must be {k}×{k}"));
        }
    }
    let n_order: usize = normal.iter().product();
    let c_order: usize = complement.iter().product();
    let identity_matrix: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();
    let twist = |j: usize| -> &Vec<Vec<i64>> { twists.get(j).unwrap_or(&identity_matrix) };
    // action of each complement element on each normal element
    let mut act = vec![vec![0usize; n_order]; c_order];
    for c in 0..c_order {
        let cv = radix_decode(c, complement);
        for x in 0..n_order {
            let mut v = radix_decode(x, normal);
            for (j, &e) in cv.iter().enumerate() {
                for _ in 0..e {
                    v = apply_matrix(twist(j), &v, normal);
                }
            }
            act[c][x] = radix_encode(&v, normal);
        }
    }
    // each twist must be an automorphism of order dividing the generator order
    for j in 0..complement.len() {
        let mut unit = vec![0; complement.len()];
        unit[j] = 1;
        let g = radix_encode(&unit, complement);
        let images: HashSet<usize> = act[g].iter().copied().collect();
        if images.len() != n_order {
            return malformed(format!("twist {j} is not invertible"));
        }
        let mut x: Vec<usize> = (0..n_order).collect();
        for _ in 0..complement[j] {
            x = x.iter().map(|&e| act[g][e]).collect();
        }
        if x.iter().enumerate().any(|(i, &e)| i != e) {
            return malformed(format!("twist {j} has order not dividing {}", complement[j]));
        }
    }
    let unit_c = |j: usize| {
        let mut unit = vec![0; complement.len()];
        unit[j] = 1;
        radix_encode(&unit, complement)
    };
    for j in 0..complement.len() {
        for i in 0..j {
            let (a, b) = (&act[unit_c(i)], &act[unit_c(j)]);
            if (0..n_order).any(|x| a[b[x]] != b[a[x]]) {
                return malformed(format!("twists {i} and {j} do not commute"));
            }
        }
    }
    let add_n = |a: usize, b: usize| -> usize {
        let va = radix_decode(a, normal);
        let vb = radix_decode(b, normal);
        let s: Vec<usize> = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
        radix_encode(&s, normal)
    };
    let add_c = |a: usize, b: usize| -> usize {
        let va = radix_decode(a, complement);
        let vb = radix_decode(b, complement);
        let s: Vec<usize> = va.iter().zip(&vb).map(|(x, y)| x + y).collect();
        radix_encode(&s, complement)
    };
    let size = n_order * c_order;
    let table: Vec<Vec<usize>> = (0..size)
        .map(|a| {
            let (na, ca) = (a % n_order, a / n_order);
            (0..size)
                .map(|b| {
                    let (nb, cb) = (b % n_order, b / n_order);
                    add_n(na, act[ca][nb]) + n_order * add_c(ca, cb)
                })
                .collect()
        })
        .collect();
    let mut gens = Vec::new();
    for i in 0..k {
        let mut v = vec![0; k];
        v[i] = 1;
        gens.push(radix_encode(&v, normal));
    }
    for j in 0..complement.len() {
        let mut v = vec![0; complement.len()];
        v[j] = 1;
        gens.push(n_order * radix_encode(&v, complement));
    }
    FiniteGroup::from_table(table)?.with_generators(gens)
}

/// The Heisenberg group of order p³ (upper unitriangular 3×3 over 𝔽_p),
/// generators a, b, c with c = [a, b] central.
pub fn heisenberg(p: usize) -> Result<FiniteGroup> {
    // N = ⟨b, c⟩ ≅ (ℤ/p)², a acts by b ↦ b·c
    semidirect(&[p, p], &[p], &[vec![vec![1, 0], vec![1, 1]]])
}

/// Cayley table of a group given by permutations (each a list of images).
pub fn permutation_group(perms: &[Vec<usize>]) -> Result<FiniteGroup> {
    if perms.is_empty() {
        return malformed("no generating permutations");
    }
    let deg = perms[0].len();
    let id: Vec<usize> = (0..deg).collect();
    let compose = |p: &Vec<usize>, q: &Vec<usize>| -> Vec<usize> { (0..deg).map(|i| q[p[i]]).collect() };
    let mut elems = vec![id.clone()];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id]);
    let mut i = 0;
    while i < elems.len() {
        for p in perms {
            let next = compose(&elems[i], p);
            if seen.insert(next.clone()) {
                elems.push(next);
            }
        }
        i += 1;
    }
    let index: std::collections::HashMap<Vec<usize>, usize> =
        elems.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
        .collect();
    FiniteGroup::from_table(table)
}
