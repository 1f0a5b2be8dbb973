//! The Boolean-base specialization: preorders, downsets as modules,
//! directedness, the ideal completion, poset reflection, least upper
//! bounds, and the dcpo universal property.
//!
//! A downset is exactly a Boolean left module and a directed downset is
//! exactly a witnessed closed core, so this module is a vocabulary layer
//! over the generic machinery; the two readings are cross-tested rather
//! than implemented twice.

use std::fmt;

use crate::completion::{
    type_aleph_completion, cauchy_completion, Completion, UniversalPropertyLimits,
};
use crate::flatness::FlatnessClass;
use crate::module::LeftModule;
use crate::quantale::{Base, Value};
use crate::space::{distance_of_assignments, nonexpansive_maps, Space};
use crate::{Aleph, Error};

fn require_bool(space: &Space) -> Result<(), Error> {
    if space.base() != Base::Bool {
        return Err(Error::ExpectedBase(Base::Bool));
    }
    Ok(())
}

fn leq(space: &Space, x: usize, y: usize) -> bool {
    space.hom(x, y).is_unit()
}

/// A downward closed subset of a preorder. May be empty.
#[derive(Clone, PartialEq, Eq)]
pub struct Downset {
    space: Space,
    members: Vec<usize>,
}

impl Downset {
    pub fn new(space: &Space, mut members: Vec<usize>) -> Result<Self, Error> {
        require_bool(space)?;
        members.sort_unstable();
        members.dedup();
        for &y in &members {
            if y >= space.object_count() {
                return Err(Error::IndexOutOfRange {
                    index: y,
                    count: space.object_count(),
                });
            }
            for x in 0..space.object_count() {
                if leq(space, x, y) && members.binary_search(&x).is_err() {
                    return Err(Error::NotDownClosed {
                        member: space.name(y).to_string(),
                        missing: space.name(x).to_string(),
                    });
                }
            }
        }
        Ok(Downset {
            space: space.clone(),
            members,
        })
    }

    /// The principal downset of `x`.
    pub fn principal(space: &Space, x: usize) -> Result<Self, Error> {
        require_bool(space)?;
        if x >= space.object_count() {
            return Err(Error::IndexOutOfRange {
                index: x,
                count: space.object_count(),
            });
        }
        let members = (0..space.object_count())
            .filter(|&y| leq(space, y, x))
            .collect();
        Ok(Downset {
            space: space.clone(),
            members,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Debug for Downset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.members.iter().map(|&x| self.space.name(x)).collect();
        write!(f, "Downset({{{}}})", names.join(","))
    }
}

/// Reads a Boolean left module as the downset of objects where it is true.
/// Down-closure follows from the module inequality.
pub fn downset_of_module(m: &LeftModule) -> Result<Downset, Error> {
    require_bool(m.space())?;
    let members: Vec<usize> = (0..m.space().object_count())
        .filter(|&x| m.value(x).is_unit())
        .collect();
    Ok(Downset {
        space: m.space().clone(),
        members,
    })
}

/// The indicator module of a downset; inverse to [`downset_of_module`].
pub fn module_of_downset(d: &Downset) -> LeftModule {
    let values: Vec<Value> = (0..d.space.object_count())
        .map(|x| Value::Bool(d.members.binary_search(&x).is_ok()))
        .collect();
    LeftModule::new(&d.space, values).expect("a downset indicator is a valid module")
}

/// Directedness at any infinite regular cardinal: non-empty with an
/// internal upper bound for the whole downset. On finite carriers a
/// single bound settles every family size, so the tag is inert.
pub fn is_directed(d: &Downset, _aleph: Aleph) -> bool {
    !d.members.is_empty()
        && d.members
            .iter()
            .any(|&u| d.members.iter().all(|&x| leq(&d.space, x, u)))
}

/// Flatness of a Boolean module in downset terms: P1 is non-emptiness,
/// the aleph classes are directedness, and the adjoint class asks for a
/// greatest element (which for a downset is the same as directedness).
pub fn flatness_bool(m: &LeftModule, class: &FlatnessClass) -> Result<bool, Error> {
    let d = downset_of_module(m)?;
    Ok(match class {
        FlatnessClass::P1 => !d.is_empty(),
        FlatnessClass::Aleph(a) => is_directed(&d, *a),
        FlatnessClass::Adjoint => is_directed(&d, Aleph::OMEGA),
    })
}

/// The ideal completion: all directed downsets under inclusion, with
/// `a` embedded as its principal downset. This is precisely the witnessed
/// closed-core completion of the Boolean space, and that is how it is
/// computed.
pub fn ideal_completion(a: &Space, aleph: Aleph) -> Result<Completion, Error> {
    require_bool(a)?;
    type_aleph_completion(a, aleph)
}

/// Quotient by mutual comparability; the result is a poset.
pub fn poset_reflection(a: &Space) -> Result<Completion, Error> {
    require_bool(a)?;
    cauchy_completion(a)
}

/// Least upper bound of a set of objects, up to equivalence, lowest index
/// first. An empty set yields the least element of the preorder if any.
pub fn lub_of_subset(space: &Space, subset: &[usize]) -> Result<Option<usize>, Error> {
    require_bool(space)?;
    for &x in subset {
        if x >= space.object_count() {
            return Err(Error::IndexOutOfRange {
                index: x,
                count: space.object_count(),
            });
        }
    }
    let n = space.object_count();
    let upper: Vec<usize> = (0..n)
        .filter(|&u| subset.iter().all(|&x| leq(space, x, u)))
        .collect();
    Ok(upper
        .iter()
        .copied()
        .find(|&u0| upper.iter().all(|&u| leq(space, u0, u))))
}

pub fn lub_of_downset(d: &Downset) -> Option<usize> {
    lub_of_subset(&d.space, &d.members).expect("members are in range")
}

/// Outcome of [`check_dcpo_universal_property`].
#[derive(Debug, Clone)]
pub struct DcpoReport {
    /// Monotone maps `A -> B`.
    pub monotone_maps: usize,
    /// Monotone maps `ideal_completion(A) -> B` preserving directed lubs.
    pub preserving_maps: usize,
    pub issues: Vec<String>,
}

impl DcpoReport {
    pub fn holds(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Verifies by enumeration that composing with the embedding is an
/// equivalence between the directed-lub-preserving monotone maps
/// `ideal_completion(A) -> B` and all monotone maps `A -> B`.
///
/// Every finite preorder is directed complete (a finite directed set
/// contains an upper bound of itself), so any finite `B` qualifies.
pub fn check_dcpo_universal_property(
    a: &Space,
    b: &Space,
    limits: &UniversalPropertyLimits,
) -> Result<DcpoReport, Error> {
    require_bool(a)?;
    require_bool(b)?;
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

    let idl = ideal_completion(a, Aleph::OMEGA)?;
    let carrier_len = idl.space().object_count();
    let mut issues = Vec::new();

    // Non-empty directed subsets of the carrier with their lubs. Pairwise
    // bounds suffice on finite sets.
    let mut directed: Vec<(Vec<usize>, usize)> = Vec::new();
    for mask in 1u32..(1u32 << carrier_len) {
        let subset: Vec<usize> = (0..carrier_len).filter(|&i| mask & (1 << i) != 0).collect();
        let pairwise = subset.iter().all(|&i| {
            subset.iter().all(|&j| {
                subset
                    .iter()
                    .any(|&k| leq(idl.space(), i, k) && leq(idl.space(), j, k))
            })
        });
        if !pairwise {
            continue;
        }
        match lub_of_subset(idl.space(), &subset)? {
            Some(lub) => directed.push((subset, lub)),
            None => issues.push(format!(
                "ideal completion is missing a directed lub for {subset:?}"
            )),
        }
    }

    let plain = nonexpansive_maps(a, b);
    let candidates = nonexpansive_maps(idl.space(), b);
    let mut preserving: Vec<Vec<usize>> = Vec::new();
    'candidates: for h in candidates {
        for (subset, lub) in &directed {
            let image: Vec<usize> = subset.iter().map(|&i| h[i]).collect();
            match lub_of_subset(b, &image)? {
                None => continue 'candidates,
                Some(target_lub) => {
                    let hl = h[*lub];
                    if !(leq(b, hl, target_lub) && leq(b, target_lub, hl)) {
                        continue 'candidates;
                    }
                }
            }
        }
        preserving.push(h);
    }

    let embedding = idl.embedding();
    let restrict = |h: &[usize]| -> Vec<usize> { embedding.iter().map(|&e| h[e]).collect() };

    for h in &preserving {
        if !plain.contains(&restrict(h)) {
            issues.push(format!(
                "composite of a preserving map with the embedding is not monotone: {h:?}"
            ));
        }
    }
    // Order preservation both ways between the two map preorders.
    for h1 in &preserving {
        for h2 in &preserving {
            let upstairs = distance_of_assignments(b, carrier_len, h1, h2).is_unit();
            let downstairs =
                distance_of_assignments(b, a.object_count(), &restrict(h1), &restrict(h2))
                    .is_unit();
            if upstairs != downstairs {
                issues.push(format!(
                    "pointwise order not preserved between {h1:?} and {h2:?}"
                ));
            }
        }
    }
    // Essential surjectivity up to order equivalence.
    for f in &plain {
        let hit = preserving.iter().any(|h| {
            let composed = restrict(h);
            distance_of_assignments(b, a.object_count(), &composed, f).is_unit()
                && distance_of_assignments(b, a.object_count(), f, &composed).is_unit()
        });
        if !hit {
            issues.push(format!("monotone map {f:?} is not reached from the completion"));
        }
    }

    Ok(DcpoReport {
        monotone_maps: plain.len(),
        preserving_maps: preserving.len(),
        issues,
    })
}

/// DOT rendering of the Hasse diagram: nodes are the classes of the poset
/// reflection, edges the transitive reduction of the strict order.
pub fn hasse_dot(a: &Space) -> Result<String, Error> {
    let reflection = poset_reflection(a)?;
    let poset = reflection.space();
    let n = poset.object_count();
    let lt = |i: usize, j: usize| leq(poset, i, j) && i != j;
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
    for name in poset.objects() {
        out.push_str(&format!("  \"{name}\";\n"));
    }
    for i in 0..n {
        for j in 0..n {
            if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    poset.name(i),
                    poset.name(j)
                ));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
