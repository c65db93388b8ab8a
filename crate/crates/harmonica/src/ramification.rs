//! Ramification profiles of harmonic quotient maps and the exact
//! Riemann–Hurwitz identity for graphs.
//!
//! For a harmonic action the quotient map has horizontal multiplicity
//! `m(x) = |Γ_x|` and vertical multiplicity `v(x)` (collapsed edges at `x`),
//! with `w(x) = v(x)/|Γ_x|` integral. Branch data `(r_y, w_y)` is constant
//! along fibers, and
//!
//! ```text
//!   2g - 2 = |Γ|(2g' - 2) + Σ_x [2(m(x) - 1) + v(x)]
//!          = |Γ|(2g' - 2 + R),   R = Σ_y [2(1 - 1/r_y) + w_y].
//! ```
//!
//! Everything here is exact: orders and multiplicities are integers, `R` is
//! a reduced big rational.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::action::ActionGroup;
use crate::error::{Error, Result};
use crate::multigraph::VertexId;

/// Exact reduced rational.
pub type Rational = BigRational;

/// Shorthand constructor for small exact rationals.
pub fn rational(numerator: i64, denominator: i64) -> Rational {
    BigRational::new(BigInt::from(numerator), BigInt::from(denominator))
}

/// Per-source-vertex ramification data of a harmonic quotient map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRamification {
    pub vertex: VertexId,
    /// Horizontal multiplicity `m(x) = |Γ_x|`.
    pub horizontal: u64,
    /// Vertical multiplicity `v(x)`: collapsed edges at the vertex.
    pub vertical: u64,
    /// `w(x)` with `w(x) · |Γ_x| = v(x)`.
    pub weight: u64,
}

/// A quotient vertex with `r > 1` or `w > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPoint {
    /// Vertex of the quotient graph.
    pub quotient_vertex: VertexId,
    /// Stabilizer order of any point in the fiber.
    pub r: u64,
    /// Vertical weight of any point in the fiber.
    pub w: u64,
}

/// Full ramification profile of a harmonic action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationProfile {
    pub group_order: u64,
    pub genus: u64,
    pub quotient_genus: u64,
    pub vertices: Vec<VertexRamification>,
    /// Branch points sorted by descending `(r, w)`.
    pub branch_points: Vec<BranchPoint>,
    /// `R = Σ_y [2(1 - 1/r_y) + w_y]`, exact.
    pub ramification_number: Rational,
    /// Branch points with horizontal ramification (`r > 1`).
    pub horizontal_branch_count: u64,
    /// Branch points with only vertical ramification (`r = 1`, `w ≥ 1`).
    pub vertical_branch_count: u64,
}

/// Computes the profile of a harmonic action. Checks fiber consistency of
/// `(r, w)` along the way; an inconsistency for a harmonic action is an
/// internal error.
pub fn profile(group: &ActionGroup) -> Result<RamificationProfile> {
    if !group.is_harmonic() {
        return Err(Error::NotHarmonic);
    }
    let graph = group.graph();
    let genus = graph.genus()?;
    let (quotient, morphism) = group.quotient();
    let quotient_genus = quotient.genus()?;
    let orbits = group.orbits_and_stabilizers();

    let mut vertices = Vec::with_capacity(graph.vertex_count());
    for x in graph.vertices() {
        let stabilizer = orbits.stabilizer_order[x.index()];
        let vertical = graph
            .incident_edges(x)
            .iter()
            .filter(|&&e| morphism.is_vertical(e))
            .count() as u64;
        if !vertical.is_multiple_of(stabilizer) {
            return Err(Error::FiberInconsistent {
                quotient_vertex: quotient
                    .vertex_name(morphism.vertex_image(x))
                    .to_string(),
            });
        }
        vertices.push(VertexRamification {
            vertex: x,
            horizontal: stabilizer,
            vertical,
            weight: vertical / stabilizer,
        });
    }

    // (r, w) must agree across each fiber.
    let mut fiber_data: Vec<Option<(u64, u64)>> = vec![None; quotient.vertex_count()];
    for record in &vertices {
        let y = morphism.vertex_image(record.vertex);
        let data = (record.horizontal, record.weight);
        match fiber_data[y.index()] {
            None => fiber_data[y.index()] = Some(data),
            Some(existing) if existing == data => {}
            Some(_) => {
                return Err(Error::FiberInconsistent {
                    quotient_vertex: quotient.vertex_name(y).to_string(),
                })
            }
        }
    }

    let mut branch_points = Vec::new();
    for y in quotient.vertices() {
        let (r, w) = fiber_data[y.index()].expect("quotient morphisms are surjective");
        if r > 1 || w > 0 {
            branch_points.push(BranchPoint {
                quotient_vertex: y,
                r,
                w,
            });
        }
    }
    branch_points.sort_by_key(|b| std::cmp::Reverse((b.r, b.w)));

    let mut ramification_number = Rational::zero();
    for bp in &branch_points {
        ramification_number += branch_term(bp.r, bp.w);
    }
    let horizontal_branch_count = branch_points.iter().filter(|b| b.r > 1).count() as u64;
    let vertical_branch_count = branch_points
        .iter()
        .filter(|b| b.r == 1 && b.w >= 1)
        .count() as u64;

    Ok(RamificationProfile {
        group_order: group.order(),
        genus,
        quotient_genus,
        vertices,
        branch_points,
        ramification_number,
        horizontal_branch_count,
        vertical_branch_count,
    })
}

/// `2(1 - 1/r) + w` as an exact rational.
pub fn branch_term(r: u64, w: u64) -> Rational {
    rational(2, 1) - BigRational::new(BigInt::from(2), BigInt::from(r)) + rational(w as i64, 1)
}

/// Checks both forms of the Riemann–Hurwitz identity exactly:
/// the integer vertex sum and the rational branch-point sum.
pub fn verify_riemann_hurwitz(p: &RamificationProfile) -> bool {
    let lhs = BigInt::from(2) * BigInt::from(p.genus) - BigInt::from(2);
    let order = BigInt::from(p.group_order);
    let quotient_term = BigInt::from(2) * BigInt::from(p.quotient_genus) - BigInt::from(2);

    let vertex_sum: BigInt = p
        .vertices
        .iter()
        .map(|v| BigInt::from(2 * (v.horizontal - 1) + v.vertical))
        .sum();
    let integer_form = lhs.clone() == order.clone() * quotient_term.clone() + vertex_sum;

    let rational_lhs = BigRational::from_integer(lhs);
    let rational_rhs = BigRational::from_integer(order)
        * (BigRational::from_integer(quotient_term) + p.ramification_number.clone());
    let rational_form = rational_lhs == rational_rhs;

    integer_form && rational_form
}

/// Case tags for the branch loci of harmonic quotient maps, grouped by the
/// value of `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchCase {
    /// `R = 0`: no branch points.
    R0Unramified,
    /// `0 < R < 2`: a single branch point with `r ≥ 2`, `w = 0`.
    Rlt2Horizontal { r: u64 },
    /// `0 < R < 2`: a single branch point with `r = w = 1`.
    Rlt2Vertical,
    /// `R = 2`, one of the five shapes.
    Req2(Req2Case),
    /// `R = 7/3`, one of the three minimal shapes.
    Rgt2Min(Rgt2Case),
    /// `R > 7/3`.
    Rgt2Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Req2Case {
    /// Single branch point, `(r, w) = (2, 1)` or `(1, 2)`.
    Single,
    /// Two branch points `(2,2; 0,0)`.
    TwoHorizontal,
    /// Two branch points `(1,1; 1,1)`.
    TwoVertical,
    /// Two branch points `(1,2; 1,0)`.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rgt2Case {
    /// Single branch point `(3, 1)`.
    Single,
    /// Two branch points `(3,2; 0,0)`.
    TwoHorizontal,
    /// Two branch points `(3,1; 0,1)`.
    Mixed,
}

impl std::fmt::Display for BranchCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BranchCase::R0Unramified => write!(f, "R0_UNRAMIFIED"),
            BranchCase::Rlt2Horizontal { r } => write!(f, "RLT2_HORIZONTAL({r})"),
            BranchCase::Rlt2Vertical => write!(f, "RLT2_VERTICAL"),
            BranchCase::Req2(Req2Case::Single) => write!(f, "REQ2_CASE(i)"),
            BranchCase::Req2(Req2Case::TwoHorizontal) => write!(f, "REQ2_CASE(iia)"),
            BranchCase::Req2(Req2Case::TwoVertical) => write!(f, "REQ2_CASE(iib)"),
            BranchCase::Req2(Req2Case::Mixed) => write!(f, "REQ2_CASE(iic)"),
            BranchCase::Rgt2Min(Rgt2Case::Single) => write!(f, "RGT2_MIN(i)"),
            BranchCase::Rgt2Min(Rgt2Case::TwoHorizontal) => write!(f, "RGT2_MIN(ii)"),
            BranchCase::Rgt2Min(Rgt2Case::Mixed) => write!(f, "RGT2_MIN(iii)"),
            BranchCase::Rgt2Other => write!(f, "RGT2_OTHER"),
        }
    }
}

/// Classifies a branch vector. The tag depends on the multiset of `(r, w)`
/// pairs alone. Any vector outside the case analysis yields
/// [`Error::ClassificationGap`]; for profiles of harmonic actions this is
/// unreachable, so the census treats it as a theorem check.
pub fn classify_branch_vector(points: &[(u64, u64)]) -> Result<BranchCase> {
    let gap = |detail: String| Err(Error::ClassificationGap { detail });
    for &(r, w) in points {
        if r == 0 {
            return gap(format!("branch point with r = 0 in {points:?}"));
        }
        if r == 1 && w == 0 {
            return gap(format!("non-branch entry (1, 0) in {points:?}"));
        }
    }
    let mut sorted: Vec<(u64, u64)> = points.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let total: Rational = sorted.iter().map(|&(r, w)| branch_term(r, w)).sum();
    let two = rational(2, 1);
    let seven_thirds = rational(7, 3);

    if sorted.is_empty() {
        return Ok(BranchCase::R0Unramified);
    }
    if total < two {
        return match sorted.as_slice() {
            [(r, 0)] if *r >= 2 => Ok(BranchCase::Rlt2Horizontal { r: *r }),
            [(1, 1)] => Ok(BranchCase::Rlt2Vertical),
            _ => gap(format!("R < 2 with vector {sorted:?}")),
        };
    }
    if total == two {
        return match sorted.as_slice() {
            [(2, 1)] | [(1, 2)] => Ok(BranchCase::Req2(Req2Case::Single)),
            [(2, 0), (2, 0)] => Ok(BranchCase::Req2(Req2Case::TwoHorizontal)),
            [(1, 1), (1, 1)] => Ok(BranchCase::Req2(Req2Case::TwoVertical)),
            [(2, 0), (1, 1)] => Ok(BranchCase::Req2(Req2Case::Mixed)),
            _ => gap(format!("R = 2 with vector {sorted:?}")),
        };
    }
    // R > 2 forces R ≥ 7/3.
    if total < seven_thirds {
        return gap(format!("2 < R < 7/3 with vector {sorted:?}"));
    }
    if total == seven_thirds {
        return match sorted.as_slice() {
            [(3, 1)] => Ok(BranchCase::Rgt2Min(Rgt2Case::Single)),
            [(3, 0), (2, 0)] => Ok(BranchCase::Rgt2Min(Rgt2Case::TwoHorizontal)),
            [(3, 0), (1, 1)] => Ok(BranchCase::Rgt2Min(Rgt2Case::Mixed)),
            _ => gap(format!("R = 7/3 with vector {sorted:?}")),
        };
    }
    Ok(BranchCase::Rgt2Other)
}

/// Classifies the branch locus of a profile.
pub fn classify_branch_locus(p: &RamificationProfile) -> Result<BranchCase> {
    let vector: Vec<(u64, u64)> = p.branch_points.iter().map(|b| (b.r, b.w)).collect();
    let case = classify_branch_vector(&vector)?;
    // Cross-check the stored R against the vector sum.
    let total: Rational = vector.iter().map(|&(r, w)| branch_term(r, w)).sum();
    if total != p.ramification_number {
        return Err(Error::ClassificationGap {
            detail: "stored ramification number disagrees with branch vector".to_string(),
        });
    }
    Ok(case)
}

/// Every prime factor of the group order is at most `genus + 1`
/// (equivalently, divides `(genus + 1)!`). Requires genus at least 2.
pub fn check_prime_divisor_bound(p: &RamificationProfile) -> Result<bool> {
    if p.genus < 2 {
        return Err(Error::GenusTooSmall);
    }
    Ok(prime_factors(p.group_order)
        .into_iter()
        .all(|q| q <= p.genus + 1))
}

/// For a harmonic action of prime order `p` with `g - 1 = p(g1 - 1)`,
/// `g1 > 1` and `p > g1 + 1`, the quotient map has no horizontal
/// ramification. Returns whether that holds; `false` would contradict the
/// statement being checked.
pub fn check_cyclic_unramified(cyclic: &ActionGroup, g1: u64) -> Result<bool> {
    let p = profile(cyclic)?;
    let order = p.group_order;
    if !is_prime(order) {
        return Err(Error::HypothesisUnmet {
            detail: format!("group order {order} is not prime"),
        });
    }
    if g1 <= 1 {
        return Err(Error::HypothesisUnmet {
            detail: format!("g1 = {g1} must exceed 1"),
        });
    }
    if p.genus < 1 || p.genus - 1 != order * (g1 - 1) {
        return Err(Error::HypothesisUnmet {
            detail: format!("genus {} is not 1 + {order}({g1} - 1)", p.genus),
        });
    }
    if order <= g1 + 1 {
        return Err(Error::HypothesisUnmet {
            detail: format!("prime {order} must exceed g1 + 1 = {}", g1 + 1),
        });
    }
    Ok(p.horizontal_branch_count == 0)
}

/// Order-gap check for genus at least 2: no harmonic order lies strictly
/// between `4(g-1)` and `6(g-1)`, and any order above `4(g-1)` equals
/// `6(g-1)` with a genus-0 quotient and `R = 7/3`.
pub fn check_gap_theorem(p: &RamificationProfile) -> Result<bool> {
    if p.genus < 2 {
        return Err(Error::GenusTooSmall);
    }
    let lower = 4 * (p.genus - 1);
    let upper = 6 * (p.genus - 1);
    let order = p.group_order;
    if order > lower && order < upper {
        return Ok(false);
    }
    if order > lower {
        let extremal = order == upper
            && p.quotient_genus == 0
            && p.ramification_number == rational(7, 3);
        return Ok(extremal);
    }
    Ok(true)
}

/// Upper bounds from the genus inequality suite, all for genus at least 2:
/// `|Γ| ≤ 6(g-1)` always; with a positive-genus quotient, `|Γ| ≤ g-1` when
/// unramified and `|Γ| ≤ 2g-2` otherwise. Returns the failing description,
/// if any.
pub fn check_order_bounds(p: &RamificationProfile) -> Result<Option<String>> {
    if p.genus < 2 {
        return Err(Error::GenusTooSmall);
    }
    let g = p.genus;
    let order = p.group_order;
    if order > 6 * (g - 1) {
        return Ok(Some(format!("order {order} exceeds 6(g-1) = {}", 6 * (g - 1))));
    }
    if p.quotient_genus >= 1 {
        if p.ramification_number.is_zero() && order > g - 1 {
            return Ok(Some(format!(
                "unramified order {order} exceeds g-1 = {}",
                g - 1
            )));
        }
        if p.ramification_number.is_positive() && order > 2 * g - 2 {
            return Ok(Some(format!(
                "ramified order {order} exceeds 2g-2 = {}",
                2 * g - 2
            )));
        }
    }
    Ok(None)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
