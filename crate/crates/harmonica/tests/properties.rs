//! Cross-module properties over the named-instance corpus: harmonicity of
//! compositions, criterion/definition agreement, stabilizer identities,
//! quotient structure, unramified prime-cyclic covers, and consistency
//! between the family witnesses and the census search.

use std::sync::Arc;

use harmonica::action::{induced_quotient_morphism, DEFAULT_BUDGET};
use harmonica::census;
use harmonica::covers::{
    derived_cover, spanning_tree, VoltageAssignment, VoltageGroup,
};
use harmonica::error::Error;
use harmonica::families;
use harmonica::morphism::GraphMorphism;
use harmonica::ramification::{check_cyclic_unramified, profile, verify_riemann_hurwitz};

/// The harmonic corpus: every named family instance that acts harmonically.
fn corpus() -> Vec<families::FamilyInstance> {
    let tree = families::RootedTree::single_edge();
    vec![
        families::klein_genus3(),
        families::klein_genus5(),
        families::hurwitz_genus2(),
        families::decorated_cycle(6, &tree).unwrap().instance,
        families::decorated_cycle(5, &tree).unwrap().instance,
        families::tree_double(&tree).unwrap(),
        families::tree_star(&tree, &families::GroupTable::klein_four()).unwrap(),
        families::lower_bound_family(3).unwrap(),
    ]
}

#[test]
fn criterion_matches_definition_on_the_corpus() {
    for instance in corpus() {
        for sub in instance.group.subgroups(DEFAULT_BUDGET).unwrap() {
            assert_eq!(
                sub.is_harmonic(),
                sub.is_harmonic_by_definition(DEFAULT_BUDGET).unwrap()
            );
        }
    }
}

#[test]
fn harmonicity_is_inherited_and_quotients_behave() {
    for instance in corpus() {
        assert!(instance.group.is_harmonic());
        for sub in instance.group.subgroups(DEFAULT_BUDGET).unwrap() {
            assert!(sub.is_harmonic(), "subgroups inherit harmonicity");
            let (quotient, morphism) = sub.quotient();
            assert!(quotient.is_connected());
            assert!(morphism.is_harmonic());
            assert!(morphism.is_nondegenerate());
            assert_eq!(morphism.degree().unwrap(), sub.order());

            // Stabilizer identities: m(x) = |Γ_x| and |Γ_x| divides v(x).
            let orbits = sub.orbits_and_stabilizers();
            for x in instance.graph.vertices() {
                let (m, v) = morphism.multiplicities(x).unwrap();
                assert_eq!(m, orbits.stabilizer_order[x.index()]);
                assert_eq!(v % orbits.stabilizer_order[x.index()], 0);
            }
        }
    }
}

#[test]
fn quotient_towers_compose_harmonically() {
    for instance in corpus() {
        let subgroups = instance.group.subgroups(DEFAULT_BUDGET).unwrap();
        for upper in &subgroups {
            let (_, whole) = upper.quotient();
            for lower in &subgroups {
                // lower ≤ upper?
                if !lower.elements().iter().all(|g| upper.contains(g)) {
                    continue;
                }
                let (_, part) = lower.quotient();
                let induced = induced_quotient_morphism(&part, &whole).unwrap();
                // Composition of harmonic morphisms is harmonic, and the
                // two-of-three induced map is harmonic.
                let composite = GraphMorphism::compose(&induced, &part).unwrap();
                assert!(part.is_harmonic());
                assert!(induced.is_harmonic());
                assert!(composite.is_harmonic());
                // Composite equals the direct quotient morphism.
                for x in instance.graph.vertices() {
                    assert_eq!(composite.vertex_image(x), whole.vertex_image(x));
                }
                for e in instance.graph.edges() {
                    assert_eq!(composite.edge_image(e), whole.edge_image(e));
                }
            }
        }
    }
}

#[test]
fn profiles_verify_exactly_on_the_corpus() {
    for instance in corpus() {
        let p = profile(&instance.group).unwrap();
        assert!(verify_riemann_hurwitz(&p));
        for record in &p.vertices {
            assert_eq!(record.weight * record.horizontal, record.vertical);
        }
        for bp in &p.branch_points {
            assert!(bp.r > 1 || bp.w > 0);
        }
        // Non-degeneracy in multiplicities: no vertex has all incident
        // edges vertical.
        let (_, morphism) = instance.group.quotient();
        for x in instance.graph.vertices() {
            let (m, v) = morphism.multiplicities(x).unwrap();
            assert!(m >= 1);
            assert!((v as usize) < instance.graph.degree(x));
        }
    }
}

/// For prime-cyclic subgroups the branch dichotomy is exact — a branch
/// point has either horizontal (r = p, w = 0) or purely vertical (r = 1)
/// ramification — and the genus identity specializes to
/// `2g - 2 = p(2g₀ - 2) + 2s(p - 1) + pΣwⱼ`.
#[test]
fn prime_cyclic_branch_dichotomy() {
    let is_prime = |n: u64| n >= 2 && (2..n).all(|d| n % d != 0);
    let mut checked = 0;
    for instance in corpus() {
        for sub in instance.group.subgroups(DEFAULT_BUDGET).unwrap() {
            let p = sub.order();
            if !(2..=13).contains(&p) || !is_prime(p) {
                continue;
            }
            let prof = profile(&sub).unwrap();
            let mut weight_sum = 0u64;
            for bp in &prof.branch_points {
                assert!(bp.r == 1 || (bp.r == p && bp.w == 0), "dichotomy at order {p}");
                weight_sum += bp.w;
            }
            let s = prof.horizontal_branch_count;
            let lhs = 2 * prof.genus as i64 - 2;
            let rhs = p as i64 * (2 * prof.quotient_genus as i64 - 2)
                + 2 * s as i64 * (p as i64 - 1)
                + p as i64 * weight_sum as i64;
            assert_eq!(lhs, rhs, "prime-cyclic identity at order {p}");
            checked += 1;
        }
    }
    assert!(checked > 5, "the corpus exercises several prime-cyclic covers");
}

/// An unramified prime-cyclic cover built from a cyclic voltage on the
/// genus-2 base: the deck action satisfies the hypotheses of the
/// horizontally-unramified statement and the check passes.
#[test]
fn prime_cyclic_homology_covers_are_horizontally_unramified() {
    let base = families::hurwitz_genus2();
    let tree = spanning_tree(&base.graph).unwrap();
    // Z/5 voltages: 1 and 2 on the two cotree edges (they generate).
    let group = VoltageGroup::new(vec![5]);
    let in_tree: Vec<bool> = {
        let mut flags = vec![false; base.graph.edge_count()];
        for &e in &tree {
            flags[e.index()] = true;
        }
        flags
    };
    let mut voltages = vec![group.zero(); base.graph.edge_count()];
    let mut next = 1u64;
    for e in base.graph.edges() {
        if !in_tree[e.index()] {
            voltages[e.index()] = vec![next];
            next += 1;
        }
    }
    let va = VoltageAssignment::with_voltages(Arc::clone(&base.graph), tree, group, voltages)
        .unwrap();
    let dc = derived_cover(&va).unwrap();
    // g - 1 = 5·(2 - 1), so g1 = 2 and p = 5 > g1 + 1.
    assert_eq!(dc.cover.genus().unwrap(), 6);
    assert!(dc.deck.is_harmonic());
    assert_eq!(check_cyclic_unramified(&dc.deck, 2).unwrap(), true);
}

#[test]
fn cyclic_unramified_check_rejects_bad_hypotheses() {
    // p = 2 with g1 = 2 violates p > g1 + 1.
    let base = families::hurwitz_genus2();
    let tree = spanning_tree(&base.graph).unwrap();
    let group = VoltageGroup::new(vec![2]);
    let mut voltages = vec![group.zero(); base.graph.edge_count()];
    let mut in_tree = vec![false; base.graph.edge_count()];
    for &e in &tree {
        in_tree[e.index()] = true;
    }
    for e in base.graph.edges() {
        if !in_tree[e.index()] {
            voltages[e.index()] = vec![1];
        }
    }
    let va = VoltageAssignment::with_voltages(Arc::clone(&base.graph), tree, group, voltages)
        .unwrap();
    let dc = derived_cover(&va).unwrap();
    assert!(matches!(
        check_cyclic_unramified(&dc.deck, 2),
        Err(Error::HypothesisUnmet { .. })
    ));
}

/// The census search run on a family graph finds at least the family's own
/// witness order (matching by canonical key against the census output).
#[test]
fn census_search_dominates_family_witnesses() {
    let instance = families::lower_bound_family(3).unwrap();
    let (order, _) = census::max_harmonic_order(&instance.graph, DEFAULT_BUDGET).unwrap();
    assert!(order >= instance.group.order());

    // The same graph appears in the genus-3 enumeration on ≤ 6 vertices.
    let key = instance.graph.canonical_key();
    let found = census::enumerate_graphs(3, 6)
        .iter()
        .any(|g| g.canonical_key() == key);
    assert!(found, "family graph appears in the enumeration");
}

#[test]
fn macbeath_two_subgroup_lattice_is_harmonic() {
    let cover = harmonica::covers::macbeath(2, DEFAULT_BUDGET).unwrap();
    let subgroups = cover.group.subgroups(DEFAULT_BUDGET).unwrap();
    assert!(subgroups.len() > 2);
    for sub in subgroups {
        assert!(sub.is_harmonic());
        let p = profile(&sub).unwrap();
        assert!(verify_riemann_hurwitz(&p));
    }
}
