//! Independent oracles for the table computations.
//!
//! Everything in this file recomputes expected values through routes that
//! share no code with the library: dense rational elimination, coordinate
//! rings built directly from binary/ternary forms, and the closed-form
//! tables of complete intersections and determinantal curves.

use koszul::betti::{betti_table, kpq_dim, koszul_differential, TableOptions, DEFAULT_BUDGET_MB};
use koszul::field::FieldSpec;
use koszul::models::ModelSpec;
use num::rational::BigRational;
use num::{One, Zero};

/// Plain dense Gauss elimination over the rationals.
fn dense_rank(rows: &mut Vec<Vec<BigRational>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pr);
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[row][col];
                for c in 0..ncols {
                    let v = &rows[r][c] - &f * &rows[row][c];
                    rows[r][c] = v;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    rank
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Subsets of {0..n-1} of size p in plain lexicographic order; deliberately
/// a different encoding than the library uses.
fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    if p == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for s in start..n {
            cur.push(s);
            go(s + 1, n, p, cur, out);
            cur.pop();
        }
    }
    go(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// A curve/surface presented through an explicit coordinate ring: dim of
/// R_q plus the index shift describing multiplication by the j-th section.
struct DirectRing {
    /// dim R_q for q = 0..
    dims: Vec<usize>,
    /// mult(j, q, alpha) -> index of section_j * basis_alpha inside R_{q+1}
    mult: Box<dyn Fn(usize, usize, usize) -> usize>,
    nsections: usize,
}

impl DirectRing {
    /// Rank of the strand map wedge^p V (x) R_q -> wedge^{p-1} V (x) R_{q+1},
    /// assembled over the rationals from scratch.
    fn differential_rank(&self, p: usize, q: isize) -> usize {
        if p == 0 || q < 0 {
            return 0;
        }
        let q = q as usize;
        let (dim_rq, dim_rq1) = (self.dims[q], self.dims[q + 1]);
        let n = self.nsections;
        let src = subsets(n, p);
        let dst = subsets(n, p - 1);
        let dst_index = |t: &[usize]| dst.iter().position(|s| s == t).expect("subset");
        let ncols = src.len() * dim_rq;
        let nrows = dst.len() * dim_rq1;
        let mut rows = vec![vec![BigRational::zero(); ncols]; nrows];
        for (w, subset) in src.iter().enumerate() {
            for alpha in 0..dim_rq {
                let col = w * dim_rq + alpha;
                for (pos, &j) in subset.iter().enumerate() {
                    let t: Vec<usize> = subset.iter().copied().filter(|&s| s != j).collect();
                    let row = dst_index(&t) * dim_rq1 + (self.mult)(j, q, alpha);
                    let sign = if pos % 2 == 0 {
                        BigRational::one()
                    } else {
                        -BigRational::one()
                    };
                    rows[row][col] = &rows[row][col] + &sign;
                }
            }
        }
        dense_rank(&mut rows)
    }

    fn kpq(&self, p: usize, q: usize) -> usize {
        let dom = binom(self.nsections, p) * self.dims[q];
        dom - self.differential_rank(p, q as isize) - self.differential_rank(p + 1, q as isize - 1)
    }
}

/// The degree-3 curve through binary cubics: R_q is the space of binary
/// forms of degree 3q and the sections are the four cubics u^{3-j} v^j.
fn direct_twisted_cubic() -> DirectRing {
    DirectRing {
        dims: (0..6).map(|q| 3 * q + 1).collect(),
        mult: Box::new(|j, _q, alpha| alpha + j),
        nsections: 4,
    }
}

/// The quadratic surface embedding through ternary quadrics: R_q is the
/// space of ternary forms of degree 2q.
fn direct_veronese() -> DirectRing {
    fn basis(d: usize) -> Vec<(usize, usize)> {
        // exponents (a, b) of x^a y^b z^{d-a-b}, ordered lexicographically
        let mut out = Vec::new();
        for a in (0..=d).rev() {
            for b in (0..=(d - a)).rev() {
                out.push((a, b));
            }
        }
        out
    }
    let dims: Vec<usize> = (0..5).map(|q| binom(2 * q + 2, 2)).collect();
    let mult = move |j: usize, q: usize, alpha: usize| -> usize {
        let sections = basis(2);
        let (sa, sb) = sections[j];
        let (a, b) = basis(2 * q)[alpha];
        basis(2 * q + 2)
            .iter()
            .position(|&(x, y)| x == a + sa && y == b + sb)
            .expect("product monomial")
    };
    DirectRing {
        dims,
        mult: Box::new(mult),
        nsections: 6,
    }
}

#[test]
fn twisted_cubic_against_direct_ring() {
    let oracle = direct_twisted_cubic();
    // frozen intermediate ranks for (p,q) = (1,1): 16 -> 7 surjective,
    // incoming 6 -> 16 injective
    assert_eq!(oracle.differential_rank(1, 1), 7);
    assert_eq!(oracle.differential_rank(2, 0), 6);
    assert_eq!(oracle.kpq(1, 1), 3);
    assert_eq!(oracle.kpq(2, 1), 2);
    assert_eq!(oracle.kpq(2, 2), 0);
    assert_eq!(oracle.kpq(0, 0), 1);

    // the full pipeline (parser, echelon, colex differentials, sparse
    // elimination) must agree cell by cell
    for field in [FieldSpec::Rationals, FieldSpec::default()] {
        let pres = ModelSpec::parse("rnc:3", field, 0).unwrap().build().unwrap();
        for p in 0..=3usize {
            for q in 0..=2usize {
                assert_eq!(
                    kpq_dim(&pres, p, q),
                    oracle.kpq(p, q),
                    "K_{{{p},{q}}} over {field}"
                );
            }
        }
        let d = koszul_differential(&pres, 1, 1);
        assert_eq!(d.rank(), oracle.differential_rank(1, 1));
    }
}

#[test]
fn veronese_against_direct_ring() {
    let oracle = direct_veronese();
    assert_eq!(oracle.kpq(1, 1), 6);
    assert_eq!(oracle.kpq(2, 1), 8);
    let pres = ModelSpec::parse("veronese:2,2", FieldSpec::default(), 0)
        .unwrap()
        .build()
        .unwrap();
    for p in 0..=2usize {
        for q in 0..=1usize {
            assert_eq!(kpq_dim(&pres, p, q), oracle.kpq(p, q), "K_{{{p},{q}}}");
        }
    }
}

#[test]
fn veronese_full_table() {
    // support forced by the strand identities: (6, 8, 3) along q = 1
    let pres = ModelSpec::parse("veronese:2,2", FieldSpec::default(), 0)
        .unwrap()
        .build()
        .unwrap();
    let table = betti_table(
        &pres,
        &TableOptions {
            p_max: 4,
            q_max: 2,
            budget_mb: DEFAULT_BUDGET_MB,
            seed: 0,
        },
    );
    assert_eq!(table.get(1, 1), Some(6));
    assert_eq!(table.get(2, 1), Some(8));
    assert_eq!(table.get(3, 1), Some(3));
    for (&(p, q), &d) in &table.entries {
        if !matches!((p, q), (0, 0) | (1, 1) | (2, 1) | (3, 1)) {
            assert_eq!(d, 0, "K_{{{p},{q}}}");
        }
    }
}

/// Complete intersections have closed-form tables: K_{p,q} counts the
/// p-subsets of the generator degrees summing to p + q.
fn ci_expected(degrees: &[usize], p: usize, q: usize) -> usize {
    if p == 0 {
        return usize::from(q == 0);
    }
    subsets(degrees.len(), p)
        .iter()
        .filter(|s| s.iter().map(|&i| degrees[i]).sum::<usize>() == p + q)
        .count()
}

#[test]
fn complete_intersections_match_their_closed_form() {
    for (model, degrees) in [("ci:2,3", vec![2usize, 3]), ("ci:2,2,2", vec![2, 2, 2])] {
        let pres = ModelSpec::parse(model, FieldSpec::default(), 0)
            .unwrap()
            .build()
            .unwrap();
        let p_max = degrees.len();
        let table = betti_table(
            &pres,
            &TableOptions {
                p_max,
                q_max: 3,
                budget_mb: DEFAULT_BUDGET_MB,
                seed: 0,
            },
        );
        for p in 0..=p_max {
            for q in 0..=3usize {
                assert_eq!(
                    table.get(p, q),
                    Some(ci_expected(&degrees, p, q)),
                    "{model} K_{{{p},{q}}}"
                );
            }
        }
    }
}

#[test]
fn rational_normal_curves_match_the_determinantal_formula() {
    // linear strand of the degree-d curve: dim K_{p,1} = p C(d, p+1)
    for d in [3usize, 4, 5] {
        let pres = ModelSpec::parse(&format!("rnc:{d}"), FieldSpec::default(), 0)
            .unwrap()
            .build()
            .unwrap();
        let table = betti_table(
            &pres,
            &TableOptions {
                p_max: d - 1,
                q_max: 2,
                budget_mb: DEFAULT_BUDGET_MB,
                seed: 0,
            },
        );
        for p in 1..=(d - 1) {
            assert_eq!(
                table.get(p, 1),
                Some(p * binom(d, p + 1)),
                "rnc:{d} K_{{{p},1}}"
            );
            assert_eq!(table.get(p, 2), Some(0), "rnc:{d} K_{{{p},2}}");
        }
    }
}

#[test]
fn sparse_ranks_match_dense_on_model_differentials() {
    let pres = ModelSpec::parse("ci:2,3", FieldSpec::Rationals, 0)
        .unwrap()
        .build()
        .unwrap();
    for (p, q) in [(1usize, 1isize), (2, 1), (2, 0), (1, 2)] {
        let d = koszul_differential(&pres, p, q);
        let mut rows = vec![vec![BigRational::zero(); d.ncols()]; d.nrows()];
        for (r, c, v) in d.entries() {
            if let koszul::field::Scalar::Rat(x) = v {
                rows[*r as usize][*c as usize] = (**x).clone();
            }
        }
        assert_eq!(d.rank(), dense_rank(&mut rows), "d_{{{p},{q}}}");
    }
}
