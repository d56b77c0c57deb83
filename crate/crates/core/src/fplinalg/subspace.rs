use std::collections::BTreeMap;

use super::{FpMatrix, PrimeField};

/// A subspace of F_p^n held as reduced row echelon rows, sorted by pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        let mut s = Self::zero(field, ambient);
        for i in 0..ambient {
            let mut v = vec![0; ambient];
            v[i] = 1;
            s.insert(&v);
        }
        s
    }

    pub fn from_vectors<'a, I>(field: PrimeField, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<u32>>,
    {
        let mut s = Self::zero(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let f = self.field;
        let mut out = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = out[pc];
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row).skip(pc) {
                *o = f.sub(*o, f.mul(c, r));
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Add `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut r = self.reduce(v);
        let Some(lead) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(r[lead]);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[lead];
            if c == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&r).skip(lead) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        let at = self.pivots.partition_point(|&p| p < lead);
        self.pivots.insert(at, lead);
        self.rows.insert(at, r);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let n = self.ambient;
        let a = self.dim();
        // columns: basis of self, then basis of other; kernel vectors give
        // combinations lying in both
        let mut cols: Vec<Vec<u32>> = self.rows.clone();
        cols.extend(other.rows.iter().cloned());
        let m = FpMatrix::from_columns(self.field, n, &cols);
        let f = self.field;
        let mut out = Subspace::zero(self.field, n);
        for k in m.kernel_basis() {
            let mut v = vec![0; n];
            for (&c, row) in k[..a].iter().zip(&self.rows) {
                if c == 0 {
                    continue;
                }
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = f.add(*x, f.mul(c, y));
                }
            }
            out.insert(&v);
        }
        out
    }

    /// Canonical representatives of `of` modulo `self`: residues of the basis
    /// of `of`, brought to reduced echelon form.
    pub fn complement_in(&self, of: &Subspace) -> Vec<Vec<u32>> {
        let mut reps = Subspace::zero(self.field, self.ambient);
        for r in &of.rows {
            let res = self.reduce(r);
            reps.insert(&res);
        }
        // reduce once more so reps carry no pivot coordinates of self
        reps.rows.iter().map(|r| self.reduce(r)).collect()
    }

    /// Standard basis vectors at non-pivot positions: a complement of self in
    /// the ambient space.
    pub fn standard_complement(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&i| !is_pivot[i]).collect()
    }
}

/// Incremental sparse echelon basis, used to quotient large monomial spaces
/// by relation ideals.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    field: PrimeField,
    rows: Vec<Vec<(u32, u32)>>,
    pivot_row: Vec<Option<u32>>,
}

pub type SparseVec = BTreeMap<u32, u32>;

impl SparseEchelon {
    pub fn new(field: PrimeField, ambient: usize) -> Self {
        SparseEchelon {
            field,
            rows: Vec::new(),
            pivot_row: vec![None; ambient],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    fn subtract_row(&self, v: &mut SparseVec, row: usize, c: u32) {
        let f = self.field;
        for &(col, val) in &self.rows[row] {
            let e = v.entry(col).or_insert(0);
            *e = f.sub(*e, f.mul(c, val));
            if *e == 0 {
                v.remove(&col);
            }
        }
    }

    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        v.retain(|_, x| *x != 0);
        loop {
            let Some((&lead, &c)) = v.iter().next() else {
                return false;
            };
            match self.pivot_row[lead as usize] {
                Some(r) => self.subtract_row(&mut v, r as usize, c),
                None => {
                    let inv = self.field.inv(c);
                    let row: Vec<(u32, u32)> =
                        v.iter().map(|(&k, &x)| (k, self.field.mul(x, inv))).collect();
                    self.pivot_row[lead as usize] = Some(self.rows.len() as u32);
                    self.rows.push(row);
                    return true;
                }
            }
        }
    }

    /// Normal form of `v`: no pivot columns remain.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        v.retain(|_, x| *x != 0);
        let mut cursor = 0u32;
        loop {
            let next = v
                .range(cursor..)
                .find(|(&k, _)| self.pivot_row[k as usize].is_some())
                .map(|(&k, &c)| (k, c));
            let Some((k, c)) = next else {
                return v;
            };
            let r = self.pivot_row[k as usize].unwrap() as usize;
            self.subtract_row(&mut v, r, c);
            cursor = k + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn insert_and_reduce() {
        let mut s = Subspace::zero(f(3), 3);
        assert!(s.insert(&[1, 1, 0]));
        assert!(!s.insert(&[2, 2, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[1, 2, 1]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.standard_complement(), vec![2]);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::from_vectors(f(2), 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::from_vectors(f(2), 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = a.intersection(&b);
        assert_eq!(i.basis(), &[vec![0, 1, 0]]);
    }

    #[test]
    fn sparse_matches_dense() {
        let field = f(5);
        let vecs = vec![vec![0, 2, 1, 0], vec![1, 0, 3, 4], vec![1, 2, 4, 4]];
        let dense = Subspace::from_vectors(field, 4, &vecs);
        let mut sparse = SparseEchelon::new(field, 4);
        for v in &vecs {
            let sv: SparseVec = v
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| (i as u32, x))
                .collect();
            sparse.insert(sv);
        }
        assert_eq!(sparse.rank(), dense.dim());
        let probe: SparseVec = [(0, 1), (1, 1), (2, 1), (3, 1)].into_iter().collect();
        let red = sparse.reduce(probe);
        let mut dv = vec![0; 4];
        for (k, v) in red {
            dv[k as usize] = v;
        }
        assert_eq!(dv, dense.reduce(&[1, 1, 1, 1]));
    }
}
