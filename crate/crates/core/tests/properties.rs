mod common;

use std::sync::Arc;

use contingency::linalg::det_bareiss;
use contingency::metamatrix::{
    binomial, fubini, generalized_count, inclusion_exclusion_entry, stirling_first, stirling_second, MetaMatrix, Method,
};
use contingency::partitions::{enumerate_ordered_partitions, refines};
use contingency::sheaf::Stratification;
use contingency::strata::{
    classify, contingency_label, fnf_label, ifnf_label, multiplicity_partition, Point, PointConfiguration,
};
use contingency::topology::{homology, smith_dense, smith_sparse, SimplicialComplex};
use contingency::{CmFilter, CmPoset, ContingencyMatrix, Kind, OrderedPartition};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with_last = subsets(n - 1, k - 1);
    for s in &mut with_last {
        s.push(n - 1);
    }
    let mut out = subsets(n - 1, k);
    out.extend(with_last);
    out
}

/// Invariant factors from gcds of k × k minors: `d_k = D_k / D_{k-1}`.
fn gcd_ladder(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let (r, c) = (m.len(), m[0].len());
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=r.min(c) {
        let mut g = BigInt::zero();
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<BigInt>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
                g = g.gcd(&det_bareiss(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-5i64..=5, c), r))
}

fn composition() -> impl Strategy<Value = OrderedPartition> {
    prop::collection::vec(1u32..=4, 1..=6).prop_map(|p| OrderedPartition::new(p).unwrap())
}

fn random_complex() -> impl Strategy<Value = SimplicialComplex> {
    prop::collection::vec(prop::collection::btree_set(0u32..7, 1..=4), 1..=6).prop_map(|facets| {
        let facets: Vec<Vec<u32>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
        SimplicialComplex::from_facets(7, &facets)
    })
}

fn facets_of(k: &SimplicialComplex) -> Vec<Vec<u32>> {
    (0..=k.dimension().max(-1)).flat_map(|d| k.simplices(d as usize).to_vec()).collect()
}

fn contingency_matrix() -> impl Strategy<Value = ContingencyMatrix> {
    (1usize..=5).prop_flat_map(|n| {
        let all = contingency::contingency::enumerate_cm(&CmFilter::weight(n)).unwrap();
        (0..all.len()).prop_map(move |k| all[k].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_matches_gcd_of_minors(m in int_matrix()) {
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let diag = smith_dense(big.clone());
        prop_assert_eq!(&diag, &gcd_ladder(&big));
        for w in diag.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        let cols: Vec<Vec<(u32, i64)>> = (0..m[0].len())
            .map(|j| (0..m.len()).filter(|&i| m[i][j] != 0).map(|i| (i as u32, m[i][j])).collect())
            .collect();
        let sparse = smith_sparse(m.len(), &cols);
        prop_assert_eq!(sparse.rank, diag.len());
        let torsion: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
        prop_assert_eq!(sparse.torsion, torsion);
    }

    #[test]
    fn cone_is_acyclic(k in random_complex()) {
        let apex = 7u32;
        let facets: Vec<Vec<u32>> = facets_of(&k).into_iter().map(|mut f| { f.push(apex); f }).collect();
        prop_assert!(homology(&SimplicialComplex::from_facets(8, &facets)).is_acyclic());
    }

    #[test]
    fn suspension_shifts_homology(k in random_complex()) {
        let mut facets = Vec::new();
        for f in facets_of(&k) {
            for pole in [7u32, 8] {
                let mut g = f.clone();
                g.push(pole);
                facets.push(g);
            }
        }
        let h = homology(&k);
        let s = homology(&SimplicialComplex::from_facets(9, &facets));
        for d in -1..=k.dimension() {
            prop_assert_eq!(h.betti(d), s.betti(d + 1));
            prop_assert_eq!(h.torsion(d), s.torsion(d + 1));
        }
        prop_assert_eq!(s.betti(-1), 0);
    }

    #[test]
    fn partitions_round_trip(a in composition()) {
        let n = a.weight() as u32;
        prop_assert_eq!(OrderedPartition::from_subset(n, &a.to_subset()).unwrap(), a.clone());
        prop_assert!(refines(&OrderedPartition::whole(n).unwrap(), &a).unwrap());
        for i in 0..a.len().saturating_sub(1) {
            prop_assert!(refines(&a.contract(i).unwrap(), &a).unwrap());
        }
    }

    #[test]
    fn transpose_swaps_directions(m in contingency_matrix()) {
        let t = m.transpose();
        prop_assert_eq!(fnf_label(&t), ifnf_label(&m));
        prop_assert_eq!(multiplicity_partition(&t), multiplicity_partition(&m));
        for i in 0..m.rows().saturating_sub(1) {
            prop_assert_eq!(m.contract(Kind::Horizontal, i).unwrap().transpose(), t.contract(Kind::Vertical, i).unwrap());
            prop_assert_eq!(m.is_anodyne(Kind::Horizontal, i).unwrap(), t.is_anodyne(Kind::Vertical, i).unwrap());
        }
    }

    #[test]
    fn stirling_recurrences(k in 0u64..14, p in 0u64..14) {
        // S(k+1, p) = p S(k, p) + S(k, p-1)
        let lower = if p == 0 { BigInt::zero() } else { stirling_second(k, p - 1) };
        prop_assert_eq!(stirling_second(k + 1, p), BigInt::from(p) * stirling_second(k, p) + lower);
        // c(k+1, p) = k c(k, p) + c(k, p-1)
        let lower = if p == 0 { BigInt::zero() } else { stirling_first(k, p - 1) };
        prop_assert_eq!(stirling_first(k + 1, p), BigInt::from(k) * stirling_first(k, p) + lower);
    }

    #[test]
    fn fubini_recurrence(k in 1u64..14) {
        let rhs: BigInt = (1..=k).map(|i| binomial(k, i) * fubini(k - i)).sum();
        prop_assert_eq!(fubini(k), rhs);
    }

    #[test]
    fn inclusion_exclusion_inverts_deletion(n in 1u64..=12, p in 1u64..=12, q in 1u64..=12) {
        let mut acc = BigInt::zero();
        for i in 1..=p {
            for j in 1..=q {
                acc += binomial(p, i) * binomial(q, j) * inclusion_exclusion_entry(n, i, j);
            }
        }
        prop_assert_eq!(acc, generalized_count(n, p, q));
        prop_assert_eq!(inclusion_exclusion_entry(n, p, q), inclusion_exclusion_entry(n, q, p));
        prop_assert!(!inclusion_exclusion_entry(n, p, q).is_negative());
        prop_assert_eq!(inclusion_exclusion_entry(n, p, q).is_zero(), p > n || q > n);
    }

    #[test]
    fn classifier_recovers_axis_multiplicities(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = common::random_configuration(&mut rng, n);
        let m = contingency_label(&z).unwrap();
        let mut xs: Vec<_> = z.points.iter().map(|p| p.re.clone()).collect();
        xs.sort();
        let mut ys: Vec<_> = z.points.iter().map(|p| p.im.clone()).collect();
        ys.sort();
        let runs = |v: &[num_rational::BigRational]| -> Vec<u32> {
            v.chunk_by(|a, b| a == b).map(|c| c.len() as u32).collect()
        };
        let mg = m.margins();
        prop_assert_eq!(mg.weight, n);
        prop_assert_eq!(mg.horizontal.parts().to_vec(), runs(&xs));
        prop_assert_eq!(mg.vertical.parts().to_vec(), runs(&ys));
        let mut distinct = z.points.clone();
        distinct.sort_by(|a, b| (&a.re, &a.im).cmp(&(&b.re, &b.im)));
        distinct.dedup();
        prop_assert_eq!(multiplicity_partition(&m).len(), distinct.len());

        // swapping coordinates transposes the label
        let swapped = PointConfiguration::new(z.points.iter().map(|p| Point::new(p.im.clone(), p.re.clone())).collect());
        let c = classify(&swapped).unwrap();
        prop_assert_eq!(&c.contingency, &m.transpose());
        prop_assert_eq!(c.fnf, ifnf_label(&m));
        // translation by a rational vector changes nothing
        let shift = num_rational::BigRational::new(BigInt::from(7), BigInt::from(3));
        let moved = PointConfiguration::new(z.points.iter().map(|p| Point::new(&p.re + &shift, &p.im - &shift)).collect());
        prop_assert_eq!(contingency_label(&moved).unwrap(), m);
    }
}

#[test]
fn random_representations_satisfy_the_criterion() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eaf);
    let posets: Vec<Arc<CmPoset>> = (1..=4).map(|n| Arc::new(CmPoset::build(n).unwrap())).collect();
    let mut invertible_seen = 0;
    let mut singular_square_seen = 0;
    for trial in 0..60 {
        let poset = posets[trial % 4].clone();
        let rep = common::quotient_representation(&mut rng, poset.clone(), 3);
        assert!(rep.validate().valid);
        for c in 0..poset.covers().len() {
            let m = rep.map(c);
            if m.rows() == m.cols() && m.rows() > 0 {
                if m.is_invertible() {
                    invertible_seen += 1;
                } else {
                    singular_square_seen += 1;
                }
            }
        }
        let verdict = |s| rep.is_constructible(s).unwrap().constructible;
        assert!(verdict(Stratification::Cont));
        assert_eq!(
            verdict(Stratification::Complex),
            verdict(Stratification::Fnf) && verdict(Stratification::Ifnf)
        );
        // same stratum along a cover ⇔ anodyne contraction of the matching kind
        for cover in poset.covers() {
            let (a, b) = (poset.element(cover.child), poset.element(cover.parent));
            let anodyne = a.is_anodyne(cover.kind, cover.pos).unwrap();
            assert_eq!(multiplicity_partition(a) == multiplicity_partition(b), anodyne);
            assert_eq!(fnf_label(a) == fnf_label(b), anodyne && cover.kind == Kind::Horizontal);
        }
    }
    assert!(invertible_seen > 0 && singular_square_seen > 0);
}

#[test]
fn ordered_partition_census() {
    for n in 1..=10 {
        assert_eq!(enumerate_ordered_partitions(n, None).unwrap().len(), 1 << (n - 1));
    }
}

#[test]
fn metamatrix_methods_agree_up_to_seven() {
    for n in 1..=7 {
        let e = MetaMatrix::compute(n, Method::Enumeration).unwrap();
        assert_eq!(e, MetaMatrix::compute(n, Method::InclusionExclusion).unwrap());
    }
}
