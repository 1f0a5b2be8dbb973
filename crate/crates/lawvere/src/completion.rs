//! Completions of finite quasi-metric spaces: the space of closed, possibly
//! refined, cores with the one-sided max-min distance, the quotient by
//! two-way-zero equivalence, map extension along the embedding, and an
//! enumeration check of the universal property.
//!
//! Carriers are canonical: a filter and its zero-closure sit at distance
//! zero both ways, so one closed representative is kept per equivalence
//! class, enumerated in ascending order of the index bitmask.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::filter::Filter;
use crate::quantale::Value;
use crate::space::{distance_of_assignments, nonexpansive_maps, Functor, Space};
use crate::{Aleph, Error};

/// Subset-enumerating operations refuse spaces with more objects than
/// this; beyond it the carrier search is no longer practical.
pub const SUBSET_ENUMERATION_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionKind {
    /// All closed non-empty cores.
    Type1,
    /// Closed cores carrying an internal witness.
    TypeAleph(Aleph),
    /// Two-way-zero equivalence classes.
    Cauchy,
}

impl fmt::Display for CompletionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompletionKind::Type1 => write!(f, "type1"),
            CompletionKind::TypeAleph(a) => write!(f, "type-{a}"),
            CompletionKind::Cauchy => write!(f, "cauchy"),
        }
    }
}

impl FromStr for CompletionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "type1" => Ok(CompletionKind::Type1),
            "cauchy" => Ok(CompletionKind::Cauchy),
            _ => {
                if let Some(rest) = s.strip_prefix("type-") {
                    let aleph = rest.parse::<Aleph>()?;
                    Ok(CompletionKind::TypeAleph(aleph))
                } else {
                    Err(format!(
                        "invalid completion kind `{s}`: expected `type1`, `type-omega`, `type-aleph_<k>`, or `cauchy`"
                    ))
                }
            }
        }
    }
}

/// A completed space together with its carrier bookkeeping: each carrier
/// point is a canonical core (a sorted set of base-space objects), and the
/// embedding sends a base object to the carrier index of its closure
/// (respectively its equivalence class).
#[derive(Clone)]
pub struct Completion {
    kind: CompletionKind,
    base_space: Space,
    space: Space,
    carrier: Vec<Vec<usize>>,
    embedding: Vec<usize>,
}

impl Completion {
    pub fn kind(&self) -> CompletionKind {
        self.kind
    }

    /// The original space.
    pub fn base_space(&self) -> &Space {
        &self.base_space
    }

    /// The completed space.
    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Canonical cores, one per carrier point, in carrier order.
    pub fn carrier(&self) -> &[Vec<usize>] {
        &self.carrier
    }

    /// Base object -> carrier index.
    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    pub fn embedding_functor(&self) -> Functor {
        Functor::new(
            self.base_space.clone(),
            self.space.clone(),
            self.embedding.clone(),
        )
        .expect("embedding indices are carrier indices")
    }
}

impl fmt::Debug for Completion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Completion({}, {} -> {} points)",
            self.kind,
            self.base_space.object_count(),
            self.space.object_count()
        )
    }
}

/// Zero-distance closure: `{x | join_{y in S} A(x, y) = unit}`.
pub fn closure(space: &Space, subset: &[usize]) -> Result<Vec<usize>, Error> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &x in subset {
        if x >= space.object_count() {
            return Err(Error::IndexOutOfRange {
                index: x,
                count: space.object_count(),
            });
        }
    }
    let base = space.base();
    Ok((0..space.object_count())
        .filter(|&x| {
            base.join(subset.iter().map(|&y| space.hom(x, y)))
                .is_unit()
        })
        .collect())
}

/// One-sided max-min distance between two non-empty subsets:
/// `meet_{x in S} join_{y in T} A(x, y)`. For closed cores this is the
/// distance of the completed space.
pub fn semi_hausdorff(space: &Space, s: &[usize], t: &[usize]) -> Result<Value, Error> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &x in s.iter().chain(t) {
        if x >= space.object_count() {
            return Err(Error::IndexOutOfRange {
                index: x,
                count: space.object_count(),
            });
        }
    }
    let base = space.base();
    let rows: Vec<Value> = s
        .iter()
        .map(|&x| base.join(t.iter().map(|&y| space.hom(x, y))))
        .collect();
    Ok(base.meet(rows.iter()))
}

/// Per-object closure masks: bit `x` of `masks[y]` says `A(x, y)` is the
/// unit. The closure of a subset is the union of its members' masks.
fn unit_masks(space: &Space) -> Vec<u32> {
    let n = space.object_count();
    (0..n)
        .map(|y| {
            let mut mask = 0u32;
            for x in 0..n {
                if space.hom(x, y).is_unit() {
                    mask |= 1 << x;
                }
            }
            mask
        })
        .collect()
}

fn close_mask(masks: &[u32], subset: u32) -> u32 {
    let mut out = 0u32;
    let mut bits = subset;
    while bits != 0 {
        let y = bits.trailing_zeros() as usize;
        out |= masks[y];
        bits &= bits - 1;
    }
    out
}

fn mask_core(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask & (1 << i) != 0).collect()
}

fn core_name(space: &Space, core: &[usize]) -> String {
    let names: Vec<&str> = core.iter().map(|&x| space.name(x)).collect();
    format!("{{{}}}", names.join(","))
}

fn check_enumeration_limit(space: &Space) -> Result<(), Error> {
    if space.object_count() > SUBSET_ENUMERATION_LIMIT {
        return Err(Error::TooManyObjects {
            count: space.object_count(),
            limit: SUBSET_ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Does a closed core qualify for the given completion kind?
fn kind_accepts(masks: &[u32], kind: &CompletionKind, mask: u32) -> bool {
    match kind {
        CompletionKind::Type1 => true,
        CompletionKind::TypeAleph(_) => {
            // Some core point is reached at the unit from every core point.
            let mut bits = mask;
            while bits != 0 {
                let y = bits.trailing_zeros() as usize;
                if mask & !masks[y] == 0 {
                    return true;
                }
                bits &= bits - 1;
            }
            false
        }
        CompletionKind::Cauchy => {
            // Every ordered pair sits at the unit.
            let mut bits = mask;
            while bits != 0 {
                let y = bits.trailing_zeros() as usize;
                if mask & !masks[y] != 0 {
                    return false;
                }
                bits &= bits - 1;
            }
            true
        }
    }
}

/// All closed cores of the kind, in ascending bitmask order.
pub fn kind_cores(space: &Space, kind: &CompletionKind) -> Result<Vec<Vec<usize>>, Error> {
    check_enumeration_limit(space)?;
    let n = space.object_count();
    let masks = unit_masks(space);
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        if close_mask(&masks, mask) == mask && kind_accepts(&masks, kind, mask) {
            out.push(mask_core(mask));
        }
    }
    Ok(out)
}

/// Hom matrix entries as dense ranks along the arrow order, for integer
/// max-min arithmetic inside carrier constructions.
struct Ranks {
    values: Vec<Value>,
    rank: Vec<Vec<usize>>,
}

fn ranks_of(space: &Space) -> Ranks {
    let n = space.object_count();
    let mut values: Vec<Value> = Vec::with_capacity(n * n);
    for row in space.hom_matrix() {
        values.extend(row.iter().cloned());
    }
    values.sort_by(|a, b| a.cat_cmp(b));
    values.dedup();
    let rank = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    values
                        .binary_search_by(|v| v.cat_cmp(space.hom(x, y)))
                        .expect("every entry is in the pool")
                })
                .collect()
        })
        .collect();
    Ranks { values, rank }
}

fn completion_of_cores(
    a: &Space,
    kind: CompletionKind,
    cores: Vec<Vec<usize>>,
    embedding_core: impl Fn(usize) -> Vec<usize>,
) -> Completion {
    let ranks = ranks_of(a);
    let names: Vec<String> = cores.iter().map(|c| core_name(a, c)).collect();
    let space = Space::from_fn(a.base(), names, |i, j| {
        // meet over the source core of the join over the target core.
        let r = cores[i]
            .iter()
            .map(|&x| {
                cores[j]
                    .iter()
                    .map(|&y| ranks.rank[x][y])
                    .max()
                    .expect("cores are non-empty")
            })
            .min()
            .expect("cores are non-empty");
        ranks.values[r].clone()
    })
    .expect("carrier names are distinct");
    let embedding = (0..a.object_count())
        .map(|x| {
            let target = embedding_core(x);
            cores
                .iter()
                .position(|c| *c == target)
                .expect("embedding cores are carrier points")
        })
        .collect();
    Completion {
        kind,
        base_space: a.clone(),
        space,
        carrier: cores,
        embedding,
    }
}

/// The completion by all closed cores: carrier points are the closed
/// non-empty subsets, the distance is the one-sided max-min, and the
/// embedding sends a point to the closure of its singleton.
pub fn type1_completion(a: &Space) -> Result<Completion, Error> {
    check_enumeration_limit(a)?;
    let masks = unit_masks(a);
    let cores = kind_cores(a, &CompletionKind::Type1)?;
    Ok(completion_of_cores(a, CompletionKind::Type1, cores, |x| {
        mask_core(masks[x])
    }))
}

/// The full subspace of the type-1 completion on witnessed cores.
pub fn type_aleph_completion(a: &Space, aleph: Aleph) -> Result<Completion, Error> {
    check_enumeration_limit(a)?;
    let masks = unit_masks(a);
    let kind = CompletionKind::TypeAleph(aleph);
    let cores = kind_cores(a, &kind)?;
    Ok(completion_of_cores(a, kind, cores, |x| {
        mask_core(masks[x])
    }))
}

/// The quotient by `x ~ y` iff `A(x, y)` and `A(y, x)` are both the unit.
/// Carrier points are the equivalence classes ordered by lowest member;
/// the inherited distance is well-defined on classes.
pub fn cauchy_completion(a: &Space) -> Result<Completion, Error> {
    let n = a.object_count();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x].is_some() {
            continue;
        }
        let idx = classes.len();
        let mut members = vec![x];
        class_of[x] = Some(idx);
        for y in x + 1..n {
            if class_of[y].is_none() && a.hom(x, y).is_unit() && a.hom(y, x).is_unit() {
                class_of[y] = Some(idx);
                members.push(y);
            }
        }
        classes.push(members);
    }
    let names: Vec<String> = classes.iter().map(|c| core_name(a, c)).collect();
    let space = Space::from_fn(a.base(), names, |i, j| {
        a.hom(classes[i][0], classes[j][0]).clone()
    })?;
    let embedding = (0..n).map(|x| class_of[x].expect("assigned")).collect();
    Ok(Completion {
        kind: CompletionKind::Cauchy,
        base_space: a.clone(),
        space,
        carrier: classes,
        embedding,
    })
}

pub fn complete(a: &Space, kind: &CompletionKind) -> Result<Completion, Error> {
    match kind {
        CompletionKind::Type1 => type1_completion(a),
        CompletionKind::TypeAleph(aleph) => type_aleph_completion(a, *aleph),
        CompletionKind::Cauchy => cauchy_completion(a),
    }
}

/// Completeness: every closed core of the kind has a representative.
pub fn is_complete(a: &Space, kind: &CompletionKind) -> Result<bool, Error> {
    for core in kind_cores(a, kind)? {
        let filter = Filter::new(a, core)?;
        if filter.representative().is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Extends `f : A -> B` along the embedding of `A` into its completion:
/// the carrier point with core `S` goes to the representative in `B` of
/// the direct image of `S`. Requires `B` to be complete for the kind.
///
/// Returns the completion of the source together with the extension.
pub fn extend_map(f: &Functor, kind: &CompletionKind) -> Result<(Completion, Functor), Error> {
    let report = f.validate();
    if !report.is_valid() {
        return Err(Error::InvalidFunctor(report));
    }
    let b = f.target();
    if !is_complete(b, kind)? {
        return Err(Error::TargetNotComplete(*kind));
    }
    let completion = complete(f.source(), kind)?;
    let map = completion
        .carrier()
        .iter()
        .map(|core| {
            let image: Vec<usize> = core.iter().map(|&x| f.apply(x)).collect();
            Filter::new(b, image)
                .expect("cores are non-empty")
                .representative()
                .expect("the direct image of a kind core has a representative in a complete target")
        })
        .collect();
    let functor = Functor::new(completion.space().clone(), b.clone(), map)?;
    Ok((completion, functor))
}

/// Size bounds for the universal-property enumeration.
#[derive(Debug, Clone, Copy)]
pub struct UniversalPropertyLimits {
    pub max_source: usize,
    pub max_target: usize,
}

impl Default for UniversalPropertyLimits {
    fn default() -> Self {
        UniversalPropertyLimits {
            max_source: 3,
            max_target: 3,
        }
    }
}

/// Outcome of [`check_universal_property`]: counts of the two function
/// spaces and every failed comparison.
#[derive(Debug, Clone)]
pub struct UniversalPropertyReport {
    /// Non-expansive maps `A -> B`.
    pub plain_maps: usize,
    /// Non-expansive, representative-preserving maps `completion(A) -> B`.
    pub preserving_maps: usize,
    pub issues: Vec<String>,
}

impl UniversalPropertyReport {
    pub fn holds(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Verifies by full enumeration that composing with the embedding is an
/// equivalence between the representative-preserving maps
/// `completion(A) -> B` and all maps `A -> B`: distances are preserved
/// exactly, and every map of `A` is hit up to distance zero both ways.
pub fn check_universal_property(
    a: &Space,
    b: &Space,
    kind: &CompletionKind,
    limits: &UniversalPropertyLimits,
) -> Result<UniversalPropertyReport, Error> {
    if a.object_count() > limits.max_source {
        return Err(Error::TooManyObjects {
            count: a.object_count(),
            limit: limits.max_source,
        });
    }
    if b.object_count() > limits.max_target {
        return Err(Error::TooManyObjects {
            count: b.object_count(),
            limit: limits.max_target,
        });
    }
    if !is_complete(b, kind)? {
        return Err(Error::TargetNotComplete(*kind));
    }

    let completion = complete(a, kind)?;
    let abar = completion.space();
    let embedding = completion.embedding();
    let mut issues = Vec::new();

    // Representatives of the kind cores of the completed space.
    let cores = kind_cores(abar, kind)?;
    let mut core_reps: Vec<(Vec<usize>, usize)> = Vec::with_capacity(cores.len());
    for core in cores {
        let filter = Filter::new(abar, core.clone())?;
        match filter.representative() {
            Some(r) => core_reps.push((core, r)),
            None => issues.push(format!(
                "completed space has a kind core without a representative: {core:?}"
            )),
        }
    }

    // Representatives in B, memoized by image core.
    let mut b_reps: BTreeMap<Vec<usize>, Option<usize>> = BTreeMap::new();
    let mut rep_in_b = |core: Vec<usize>| -> Option<usize> {
        *b_reps
            .entry(core.clone())
            .or_insert_with(|| Filter::new(b, core).expect("non-empty").representative())
    };

    let plain = nonexpansive_maps(a, b);
    let candidates = nonexpansive_maps(abar, b);
    let mut preserving: Vec<Vec<usize>> = Vec::new();
    'candidates: for h in candidates {
        for (core, rep) in &core_reps {
            let image: Vec<usize> = {
                let mut im: Vec<usize> = core.iter().map(|&s| h[s]).collect();
                im.sort_unstable();
                im.dedup();
                im
            };
            match rep_in_b(image) {
                None => continue 'candidates,
                Some(rb) => {
                    if !(b.hom(h[*rep], rb).is_unit() && b.hom(rb, h[*rep]).is_unit()) {
                        continue 'candidates;
                    }
                }
            }
        }
        preserving.push(h);
    }

    // Composing with the embedding lands in the plain function space and
    // preserves distances on the nose.
    let restrict =
        |h: &[usize]| -> Vec<usize> { embedding.iter().map(|&e| h[e]).collect() };
    for h in &preserving {
        let composed = restrict(h);
        if !plain.contains(&composed) {
            issues.push(format!(
                "composite of a preserving map with the embedding is not non-expansive: {h:?}"
            ));
        }
    }
    for (i, h1) in preserving.iter().enumerate() {
        for h2 in preserving.iter().skip(i) {
            let upstairs = distance_of_assignments(b, abar.object_count(), h1, h2);
            let downstairs =
                distance_of_assignments(b, a.object_count(), &restrict(h1), &restrict(h2));
            if upstairs != downstairs {
                issues.push(format!(
                    "distance not preserved between {h1:?} and {h2:?}: {upstairs} vs {downstairs}"
                ));
            }
            let upstairs = distance_of_assignments(b, abar.object_count(), h2, h1);
            let downstairs =
                distance_of_assignments(b, a.object_count(), &restrict(h2), &restrict(h1));
            if upstairs != downstairs {
                issues.push(format!(
                    "distance not preserved between {h2:?} and {h1:?}: {upstairs} vs {downstairs}"
                ));
            }
        }
    }

    // Essential surjectivity: every plain map is the restriction of some
    // preserving map up to distance zero both ways.
    for f in &plain {
        let mut hit = false;
        for h in &preserving {
            let composed = restrict(h);
            let fwd = distance_of_assignments(b, a.object_count(), &composed, f);
            let bwd = distance_of_assignments(b, a.object_count(), f, &composed);
            if fwd.is_unit() && bwd.is_unit() {
                hit = true;
                break;
            }
        }
        if !hit {
            issues.push(format!("map {f:?} is not reached from the completion"));
        }
    }

    Ok(UniversalPropertyReport {
        plain_maps: plain.len(),
        preserving_maps: preserving.len(),
        issues,
    })
}

/// DOT rendering of the specialization preorder: an edge `x -> y` for
/// every ordered pair at hom the unit, self-loops omitted.
pub fn specialization_dot(space: &Space) -> String {
    let mut out = String::from("digraph specialization {\n");
    for name in space.objects() {
        out.push_str(&format!("  \"{name}\";\n"));
    }
    let n = space.object_count();
    for x in 0..n {
        for y in 0..n {
            if x != y && space.hom(x, y).is_unit() {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    space.name(x),
                    space.name(y)
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::CostValue;

    fn z2() -> Space {
        Space::cost(&["p", "q"], &[&["0", "0"], &["1", "0"]]).unwrap()
    }

    fn z2_prime() -> Space {
        Space::cost(&["p", "q"], &[&["0", "0"], &["0", "0"]]).unwrap()
    }

    fn t3() -> Space {
        Space::cost(
            &["a", "b", "c"],
            &[&["0", "1", "3"], &["2", "0", "2"], &["1", "1", "0"]],
        )
        .unwrap()
    }

    fn s2() -> Space {
        Space::cost(&["u", "v"], &[&["0", "2"], &["2", "0"]]).unwrap()
    }

    fn cv(s: &str) -> Value {
        Value::Cost(s.parse::<CostValue>().unwrap())
    }

    #[test]
    fn closure_examples() {
        let z2 = z2();
        assert_eq!(closure(&z2, &[1]).unwrap(), vec![0, 1]);
        assert_eq!(closure(&z2, &[0]).unwrap(), vec![0]);
        let t3 = t3();
        for mask in 1..8u32 {
            let s = mask_core(mask);
            assert_eq!(closure(&t3, &s).unwrap(), s);
        }
        assert!(matches!(closure(&z2, &[]), Err(Error::EmptySubset)));
    }

    #[test]
    fn closure_is_a_closure_operator() {
        for space in [z2(), t3(), s2(), z2_prime()] {
            let n = space.object_count();
            for mask in 1u32..(1 << n) {
                let s = mask_core(mask);
                let c = closure(&space, &s).unwrap();
                // extensive
                assert!(s.iter().all(|x| c.contains(x)));
                // idempotent
                assert_eq!(closure(&space, &c).unwrap(), c);
                // monotone
                for bigger in 1u32..(1 << n) {
                    if bigger & mask == mask {
                        let cb = closure(&space, &mask_core(bigger)).unwrap();
                        assert!(c.iter().all(|x| cb.contains(x)));
                    }
                }
            }
        }
    }

    #[test]
    fn type1_completion_of_t3() {
        let t3 = t3();
        let comp = type1_completion(&t3).unwrap();
        assert_eq!(comp.space().object_count(), 7);
        assert!(comp.space().is_valid());
        let idx = |core: &[usize]| comp.carrier().iter().position(|c| c == core).unwrap();
        let a = idx(&[0]);
        let bc = idx(&[1, 2]);
        let ab = idx(&[0, 1]);
        let c = idx(&[2]);
        assert_eq!(*comp.space().hom(a, bc), cv("1"));
        assert_eq!(*comp.space().hom(ab, c), cv("3"));
    }

    #[test]
    fn type1_completion_of_z2() {
        let z2 = z2();
        let comp = type1_completion(&z2).unwrap();
        assert_eq!(comp.space().object_count(), 2);
        assert_eq!(comp.carrier(), &[vec![0], vec![0, 1]]);
        let p = 0;
        let pq = 1;
        assert_eq!(*comp.space().hom(p, pq), cv("0"));
        assert_eq!(*comp.space().hom(pq, p), cv("1"));
        // Embedding: p to {p}, q to cl({q}) = {p,q}.
        assert_eq!(comp.embedding(), &[0, 1]);
    }

    #[test]
    fn type1_completion_of_symmetric_space_is_not_symmetric() {
        let s2 = s2();
        let comp = type1_completion(&s2).unwrap();
        assert_eq!(comp.space().object_count(), 3);
        let idx = |core: &[usize]| comp.carrier().iter().position(|c| c == core).unwrap();
        let u = idx(&[0]);
        let uv = idx(&[0, 1]);
        assert_eq!(*comp.space().hom(u, uv), cv("0"));
        assert_eq!(*comp.space().hom(uv, u), cv("2"));
        assert!(!comp.space().is_symmetric());
    }

    #[test]
    fn yoneda_embedding_is_isometric() {
        for space in [z2(), t3(), s2(), z2_prime()] {
            let comp = type1_completion(&space).unwrap();
            let n = space.object_count();
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(
                        comp.space().hom(comp.embedding()[x], comp.embedding()[y]),
                        space.hom(x, y)
                    );
                }
            }
            assert!(comp.embedding_functor().is_valid());
        }
    }

    #[test]
    fn completion_hom_matches_semi_hausdorff_on_closed_cores() {
        for space in [z2(), t3(), s2()] {
            let comp = type1_completion(&space).unwrap();
            for (i, s) in comp.carrier().iter().enumerate() {
                for (j, t) in comp.carrier().iter().enumerate() {
                    assert_eq!(
                        *comp.space().hom(i, j),
                        semi_hausdorff(&space, s, t).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn semi_hausdorff_examples() {
        let t3 = t3();
        assert_eq!(semi_hausdorff(&t3, &[0], &[1, 2]).unwrap(), cv("1"));
        let s2 = s2();
        assert_eq!(semi_hausdorff(&s2, &[0, 1], &[0]).unwrap(), cv("2"));
        for space in [t3, s2] {
            let all: Vec<usize> = (0..space.object_count()).collect();
            assert!(semi_hausdorff(&space, &all, &all).unwrap().is_unit());
        }
    }

    #[test]
    fn aleph_completion_examples() {
        let z2 = z2();
        let comp = type_aleph_completion(&z2, Aleph::OMEGA).unwrap();
        assert_eq!(comp.carrier(), &[vec![0], vec![0, 1]]);

        let t3 = t3();
        let comp = type_aleph_completion(&t3, Aleph::OMEGA).unwrap();
        assert_eq!(comp.carrier(), &[vec![0], vec![1], vec![2]]);

        let s2 = s2();
        let comp = type_aleph_completion(&s2, Aleph::OMEGA).unwrap();
        assert_eq!(comp.carrier(), &[vec![0], vec![1]]);
        let cc = cauchy_completion(&s2).unwrap();
        assert_eq!(comp.space().hom_matrix(), cc.space().hom_matrix());
    }

    #[test]
    fn cauchy_completion_examples() {
        let t3 = t3();
        let comp = cauchy_completion(&t3).unwrap();
        assert_eq!(comp.space().object_count(), 3);
        assert_eq!(comp.space().hom_matrix(), t3.hom_matrix());

        let z2p = z2_prime();
        let comp = cauchy_completion(&z2p).unwrap();
        assert_eq!(comp.space().object_count(), 1);
        assert_eq!(comp.carrier(), &[vec![0, 1]]);

        let z2 = z2();
        let comp = cauchy_completion(&z2).unwrap();
        assert_eq!(comp.space().object_count(), 2);
    }

    #[test]
    fn cauchy_distance_is_well_defined_on_classes() {
        let z2p = z2_prime();
        let comp = cauchy_completion(&z2p).unwrap();
        for class_i in comp.carrier() {
            for class_j in comp.carrier() {
                for &x in class_i {
                    for &y in class_j {
                        assert_eq!(
                            z2p.hom(x, y),
                            comp.space().hom(comp.embedding()[x], comp.embedding()[y])
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn completeness_examples() {
        let t3 = t3();
        assert!(!is_complete(&t3, &CompletionKind::Type1).unwrap());
        let comp = type1_completion(&t3).unwrap();
        assert!(is_complete(comp.space(), &CompletionKind::Type1).unwrap());

        let one = Space::cost(&["x"], &[&["0"]]).unwrap();
        for kind in [
            CompletionKind::Type1,
            CompletionKind::TypeAleph(Aleph::OMEGA),
            CompletionKind::Cauchy,
        ] {
            assert!(is_complete(&one, &kind).unwrap());
        }
        // Finite spaces are always Cauchy-complete.
        for space in [z2(), t3, s2(), z2_prime()] {
            assert!(is_complete(&space, &CompletionKind::Cauchy).unwrap());
        }
    }

    #[test]
    fn double_completion_reflects_onto_the_single_one() {
        // Completeness makes the embedding into the double completion
        // reflective: every double-completion core contains the embedded
        // representative's closure mate at distance zero one way, and the
        // representative map is onto the single completion's classes. The
        // two spaces are generally NOT equivalent (see the test below).
        for space in [z2(), t3(), s2(), z2_prime()] {
            let comp = type1_completion(&space).unwrap();
            let double = type1_completion(comp.space()).unwrap();
            for (k, core) in double.carrier().iter().enumerate() {
                let filter = Filter::new(comp.space(), core.clone()).unwrap();
                let rep = filter
                    .representative()
                    .expect("the completion is complete");
                let image = double.embedding()[rep];
                // Unit of the reflection: K sits inside i(rep K).
                assert!(double.space().hom(k, image).is_unit());
                assert!(core.iter().all(|x| double.carrier()[image].contains(x)));
            }
        }
    }

    #[test]
    fn type1_completion_is_not_idempotent() {
        // The free cocompletion of a cocomplete space is a reflection, not
        // an equivalence: on S2 the single completion has three points and
        // the double completion four, pairwise non-equivalent.
        let comp = type1_completion(&s2()).unwrap();
        let double = type1_completion(comp.space()).unwrap();
        assert_eq!(comp.space().object_count(), 3);
        assert_eq!(double.space().object_count(), 4);
        let n = double.space().object_count();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    assert!(
                        !(double.space().hom(i, j).is_unit()
                            && double.space().hom(j, i).is_unit()),
                        "unexpected equivalent pair ({i}, {j})"
                    );
                }
            }
        }
    }

    #[test]
    fn aleph_and_cauchy_completions_are_idempotent() {
        for space in [z2(), t3(), s2(), z2_prime()] {
            let omega = type_aleph_completion(&space, Aleph::OMEGA).unwrap();
            let omega2 = type_aleph_completion(omega.space(), Aleph::OMEGA).unwrap();
            assert_eq!(
                omega.space().object_count(),
                omega2.space().object_count()
            );
            // The embedding is a distance-preserving bijection on carriers.
            for x in 0..omega.space().object_count() {
                for y in 0..omega.space().object_count() {
                    assert_eq!(
                        omega2
                            .space()
                            .hom(omega2.embedding()[x], omega2.embedding()[y]),
                        omega.space().hom(x, y)
                    );
                }
            }

            let cc = cauchy_completion(&space).unwrap();
            let cc2 = cauchy_completion(cc.space()).unwrap();
            assert_eq!(cc.space().object_count(), cc2.space().object_count());
            assert_eq!(cc.space().hom_matrix(), cc2.space().hom_matrix());
        }
    }

    #[test]
    fn extend_map_examples() {
        let z2 = z2();
        let one = Space::cost(&["*"], &[&["0"]]).unwrap();

        // To the one-point space: the constant extension.
        let f = Functor::constant(&z2, &one, 0).unwrap();
        let (comp, ext) = extend_map(&f, &CompletionKind::Type1).unwrap();
        assert!(ext.is_valid());
        assert_eq!(ext.map(), &[0, 0]);
        assert_eq!(comp.space().object_count(), 2);

        // The embedding itself extends to the identity up to distance zero.
        let comp = type1_completion(&z2).unwrap();
        let (source_comp, ext) =
            extend_map(&comp.embedding_functor(), &CompletionKind::Type1).unwrap();
        assert_eq!(source_comp.space(), comp.space());
        for k in 0..comp.space().object_count() {
            assert!(comp.space().hom(ext.apply(k), k).is_unit());
            assert!(comp.space().hom(k, ext.apply(k)).is_unit());
        }

        // Identity on a complete space: carrier point to its representative.
        let abar = comp.space();
        let (dcomp, ext) =
            extend_map(&Functor::identity(abar), &CompletionKind::Type1).unwrap();
        for (k, core) in dcomp.carrier().iter().enumerate() {
            let filter = Filter::new(abar, core.clone()).unwrap();
            assert_eq!(ext.apply(k), filter.representative().unwrap());
        }

        // Incomplete target is refused.
        let t3 = t3();
        let id = Functor::identity(&t3);
        assert!(matches!(
            extend_map(&id, &CompletionKind::Type1),
            Err(Error::TargetNotComplete(_))
        ));
    }

    #[test]
    fn universal_property_small_cases() {
        let one = Space::cost(&["x"], &[&["0"]]).unwrap();
        let limits = UniversalPropertyLimits {
            max_source: 3,
            max_target: 8,
        };
        let report = check_universal_property(
            &one,
            type1_completion(&one).unwrap().space(),
            &CompletionKind::Type1,
            &limits,
        )
        .unwrap();
        assert!(report.holds());
        assert_eq!(report.plain_maps, 1);
        assert_eq!(report.preserving_maps, 1);

        let z2 = z2();
        let report = check_universal_property(
            &z2,
            type1_completion(&z2).unwrap().space(),
            &CompletionKind::Type1,
            &limits,
        )
        .unwrap();
        assert!(report.holds(), "issues: {:?}", report.issues);

        // Size bound is enforced.
        let t3 = t3();
        assert!(matches!(
            check_universal_property(
                &t3,
                type1_completion(&t3).unwrap().space(),
                &CompletionKind::Type1,
                &UniversalPropertyLimits::default(),
            ),
            Err(Error::TooManyObjects { .. })
        ));
    }

    #[test]
    fn specialization_dot_lists_unit_edges() {
        let z2 = z2();
        let comp = type1_completion(&z2).unwrap();
        let dot = specialization_dot(comp.space());
        assert!(dot.contains("\"{p}\" -> \"{p,q}\""));
        assert!(!dot.contains("\"{p,q}\" -> \"{p}\""));
    }

    #[test]
    fn kind_round_trip() {
        for kind in [
            CompletionKind::Type1,
            CompletionKind::TypeAleph(Aleph::OMEGA),
            CompletionKind::TypeAleph(Aleph(2)),
            CompletionKind::Cauchy,
        ] {
            assert_eq!(kind.to_string().parse::<CompletionKind>().unwrap(), kind);
        }
        assert!("type2".parse::<CompletionKind>().is_err());
    }
}
