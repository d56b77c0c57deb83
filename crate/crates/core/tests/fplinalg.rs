use coniveau::fplinalg::{FpMatrix, PrimeField, Subspace};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

#[test]
fn rref_examples() {
    let (r, piv) = FpMatrix::from_rows(f(2), &[[1, 1], [1, 1]]).rref();
    assert_eq!(piv, vec![0]);
    assert_eq!(r.row(0), &[1, 1]);
    assert_eq!(r.row(1), &[0, 0]);
    let (r, piv) = FpMatrix::from_rows(f(3), &[[2]]).rref();
    assert_eq!((r.row(0), piv), (&[1u32][..], vec![0]));
}

#[test]
fn kernel_examples() {
    assert!(FpMatrix::identity(f(3), 3).kernel_basis().is_empty());
    assert_eq!(FpMatrix::zeros(f(2), 2, 2).kernel_basis().len(), 2);
    let k = FpMatrix::from_rows(f(2), &[[1, 1, 0], [0, 1, 1]]).kernel_basis();
    assert_eq!(k, vec![vec![1, 1, 1]]);
}

#[test]
fn solve_examples() {
    let id = FpMatrix::identity(f(5), 3);
    assert_eq!(id.solve(&[4, 0, 2]), Some(vec![4, 0, 2]));
    assert_eq!(FpMatrix::from_rows(f(2), &[[1, 1]]).solve(&[1]), Some(vec![1, 0]));
    assert_eq!(FpMatrix::from_rows(f(3), &[[0]]).solve(&[1]), None);
}

/// Determinant by permutation expansion.
fn det(m: &[Vec<u32>], fld: PrimeField) -> u32 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0;
    loop {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let mut term = 1;
        for (i, &j) in perm.iter().enumerate() {
            term = fld.mul(term, m[i][j]);
        }
        total = if inversions % 2 == 0 { fld.add(total, term) } else { fld.sub(total, term) };
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest k with a nonzero k x k minor.
fn rank_by_minors(m: &[Vec<u32>], fld: PrimeField) -> usize {
    let (r, c) = (m.len(), m[0].len());
    for k in (1..=r.min(c)).rev() {
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<u32>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
                if det(&sub, fld) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

#[test]
fn rank_matches_minor_expansion() {
    let fld = f(5);
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..60 {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        // low-rank instances by multiplying thin factors
        let inner = rng.gen_range(1..=5);
        let a: Vec<Vec<u32>> = (0..rows).map(|_| (0..inner).map(|_| rng.gen_range(0..5)).collect()).collect();
        let b: Vec<Vec<u32>> = (0..inner).map(|_| (0..cols).map(|_| rng.gen_range(0..5)).collect()).collect();
        let m: Vec<Vec<u32>> = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| (0..inner).fold(0, |s, k| fld.add(s, fld.mul(a[i][k], b[k][j]))))
                    .collect()
            })
            .collect();
        let mi: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        assert_eq!(FpMatrix::from_rows(fld, &mi).rank(), rank_by_minors(&m, fld));
    }
    // the 20 x 30 instance: its rank bounds every 5 x 5 block's rank
    let big: Vec<Vec<i64>> = (0..20).map(|_| (0..30).map(|_| rng.gen_range(0..5)).collect()).collect();
    let rank = FpMatrix::from_rows(fld, &big).rank();
    assert!(rank <= 20);
    for bi in 0..4 {
        for bj in 0..6 {
            let block: Vec<Vec<u32>> =
                (0..5).map(|i| (0..5).map(|j| big[5 * bi + i][5 * bj + j] as u32).collect()).collect();
            let bl: Vec<Vec<i64>> = block.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
            assert_eq!(FpMatrix::from_rows(fld, &bl).rank(), rank_by_minors(&block, fld));
        }
    }
}

fn matrix_strategy() -> impl Strategy<Value = (u32, Vec<Vec<i64>>)> {
    (prop_oneof![Just(2u32), Just(3), Just(5), Just(7)], 1usize..7, 1usize..7).prop_flat_map(|(p, r, c)| {
        (Just(p), proptest::collection::vec(proptest::collection::vec(0i64..p as i64, c), r))
    })
}

proptest! {
    #[test]
    fn rank_nullity((p, rows) in matrix_strategy()) {
        let m = FpMatrix::from_rows(f(p), &rows);
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rank_of_transpose((p, rows) in matrix_strategy()) {
        let m = FpMatrix::from_rows(f(p), &rows);
        let t: Vec<Vec<i64>> = (0..m.cols()).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        prop_assert_eq!(m.rank(), FpMatrix::from_rows(f(p), &t).rank());
    }

    #[test]
    fn solve_is_consistent((p, rows) in matrix_strategy(), seed in 0u64..1000) {
        let m = FpMatrix::from_rows(f(p), &rows);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x: Vec<u32> = (0..m.cols()).map(|_| rng.gen_range(0..p)).collect();
        let b = m.mul_vec(&x);
        let y = m.solve(&b).expect("b lies in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn subspace_dimension_formula((p, rows) in matrix_strategy(), split in 0usize..7) {
        let fld = f(p);
        let vs: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&x| x as u32).collect()).collect();
        let n = vs[0].len();
        let cut = split.min(vs.len());
        let a = Subspace::from_vectors(fld, n, vs[..cut].iter());
        let b = Subspace::from_vectors(fld, n, vs[cut..].iter());
        let s = a.sum(&b);
        let i = a.intersection(&b);
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        prop_assert_eq!(i.complement_in(&a).len(), a.dim() - i.dim());
    }
}
