//! Filter calculus on finite spaces.
//!
//! On a finite object set every filter is principal: it is the family of
//! all supersets of the intersection of its members. A filter is therefore
//! represented by its non-empty core. One consequence, relied on
//! throughout, is that every filter on a finite space has type 1 — the
//! witness `y = x` makes the inner join the unit — so the interesting
//! distinctions at finite scale are the type-aleph and Cauchy refinements.

use std::fmt;

use crate::module::{presheaf_hom, LeftModule, RightModule};
use crate::quantale::Value;
use crate::space::{Functor, Space};
use crate::{Aleph, Error};

/// A principal filter: the upward closure of a non-empty core subset.
#[derive(Clone, PartialEq, Eq)]
pub struct Filter {
    space: Space,
    core: Vec<usize>,
}

impl Filter {
    /// Builds the filter with the given core. The core is sorted and
    /// deduplicated; it must be non-empty and in range.
    pub fn new(space: &Space, mut core: Vec<usize>) -> Result<Self, Error> {
        if core.is_empty() {
            return Err(Error::EmptyCore);
        }
        core.sort_unstable();
        core.dedup();
        if let Some(&max) = core.last() {
            if max >= space.object_count() {
                return Err(Error::IndexOutOfRange {
                    index: max,
                    count: space.object_count(),
                });
            }
        }
        Ok(Filter {
            space: space.clone(),
            core,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// The core, sorted ascending.
    pub fn core(&self) -> &[usize] {
        &self.core
    }

    fn check_vector(&self, f: &[Value]) -> Result<(), Error> {
        if f.len() != self.space.object_count() {
            return Err(Error::LengthMismatch {
                expected: self.space.object_count(),
                got: f.len(),
            });
        }
        for v in f {
            if v.base() != self.space.base() {
                return Err(Error::BaseMismatch {
                    expected: self.space.base(),
                    got: v.base(),
                });
            }
        }
        Ok(())
    }

    /// `lim+` of a value vector along the filter: the meet over the core
    /// (for costs, the maximum).
    pub fn lim_plus(&self, f: &[Value]) -> Result<Value, Error> {
        self.check_vector(f)?;
        Ok(self.space.base().meet(self.core.iter().map(|&x| &f[x])))
    }

    /// `lim-` of a value vector along the filter: the join over the core
    /// (for costs, the minimum).
    pub fn lim_minus(&self, f: &[Value]) -> Result<Value, Error> {
        self.check_vector(f)?;
        Ok(self.space.base().join(self.core.iter().map(|&x| &f[x])))
    }

    /// The lower distance module `M-`: `x -> join_{y in core} A(x, y)`.
    /// Always a valid left module.
    pub fn module_minus(&self) -> LeftModule {
        let base = self.space.base();
        let values: Vec<Value> = (0..self.space.object_count())
            .map(|x| base.join(self.core.iter().map(|&y| self.space.hom(x, y))))
            .collect();
        LeftModule::new(&self.space, values)
            .expect("the lower distance vector satisfies the left module inequality")
    }

    /// The upper distance vector `M+`: `x -> meet_{y in core} A(x, y)`.
    /// Returned raw: it need not satisfy the module inequality except for
    /// Cauchy filters, where it coincides with `M-`.
    pub fn module_plus(&self) -> Vec<Value> {
        let base = self.space.base();
        (0..self.space.object_count())
            .map(|x| base.meet(self.core.iter().map(|&y| self.space.hom(x, y))))
            .collect()
    }

    /// The right module `M^r`: `x -> meet_{y in core} A(y, x)`.
    pub fn right_module(&self) -> RightModule {
        let base = self.space.base();
        let values: Vec<Value> = (0..self.space.object_count())
            .map(|x| base.meet(self.core.iter().map(|&y| self.space.hom(y, x))))
            .collect();
        RightModule::new(&self.space, values)
            .expect("the upper row meet satisfies the right module inequality")
    }

    /// Cauchy: every ordered pair of core points sits at the unit.
    pub fn is_cauchy(&self) -> bool {
        self.core.iter().all(|&x| {
            self.core
                .iter()
                .all(|&y| self.space.hom(x, y).is_unit())
        })
    }

    /// Type 1: `lim+ of M-` is the unit. On a principal filter this holds
    /// unconditionally (`y = x` witnesses every inner join), but it is
    /// evaluated rather than assumed.
    pub fn is_type1(&self) -> bool {
        let m_minus = self.module_minus();
        self.lim_plus(m_minus.values())
            .expect("vector built over the same space")
            .is_unit()
    }

    /// Type aleph: some core point `y` has `A(x, y) = unit` for every core
    /// point `x`. This is the finite collapse of the family condition: with
    /// core and families finite, a single witness settles every
    /// epsilon and every family size at once, so the tag is inert.
    pub fn is_type_aleph(&self, _aleph: Aleph) -> bool {
        self.core.iter().any(|&y| {
            self.core
                .iter()
                .all(|&x| self.space.hom(x, y).is_unit())
        })
    }

    /// Convergence to `x`: the filter refines the neighborhood filter.
    pub fn converges_to(&self, x: usize) -> Result<bool, Error> {
        let nbhd = neighborhood_filter(&self.space, x)?;
        Ok(self.core.iter().all(|c| nbhd.core.binary_search(c).is_ok()))
    }

    /// The representative, if some object realizes all the filter's upper
    /// distances: the lowest-index `x0` with
    /// `A(x0, a) = meet_{x in core} A(x, a)` for every `a`.
    pub fn representative(&self) -> Option<usize> {
        let n = self.space.object_count();
        let base = self.space.base();
        let required: Vec<Value> = (0..n)
            .map(|a| base.meet(self.core.iter().map(|&x| self.space.hom(x, a))))
            .collect();
        (0..n).find(|&x0| (0..n).all(|a| *self.space.hom(x0, a) == required[a]))
    }

    /// Direct image along any object assignment (the map need not be
    /// non-expansive): the filter on the target with core the image of
    /// this core.
    pub fn direct_image(&self, f: &Functor) -> Result<Filter, Error> {
        if *f.source() != self.space {
            return Err(Error::FunctorMismatch);
        }
        Filter::new(
            f.target(),
            self.core.iter().map(|&x| f.apply(x)).collect(),
        )
    }

    /// The specialization order between filters:
    /// `presheaf_hom(M-(self), M-(other))` is the unit, equivalently the
    /// core of `self` lies inside the zero-closure of the core of `other`.
    pub fn leq(&self, other: &Filter) -> Result<bool, Error> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(presheaf_hom(&self.module_minus(), &other.module_minus())?.is_unit())
    }
}

impl fmt::Debug for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.core.iter().map(|&x| self.space.name(x)).collect();
        write!(f, "Filter({{{}}})", names.join(","))
    }
}

/// The neighborhood filter of `x`: core `{y | A(y, x) = unit}`. Equals
/// `filter_of_module` of the representable at `x`.
pub fn neighborhood_filter(space: &Space, x: usize) -> Result<Filter, Error> {
    if x >= space.object_count() {
        return Err(Error::IndexOutOfRange {
            index: x,
            count: space.object_count(),
        });
    }
    let core = (0..space.object_count())
        .filter(|&y| space.hom(y, x).is_unit())
        .collect();
    Filter::new(space, core)
}

/// The filter generated by a module's sublevel sets, when it exists.
///
/// On a finite space the sublevel family stabilizes below the least
/// nonzero value of `M`, so the filter is principal on the unit set
/// `{x | M(x) = unit}`; it exists exactly when the join of all values is
/// the unit (for costs, when the minimum of `M` is zero).
pub fn filter_of_module(m: &LeftModule) -> Option<Filter> {
    let space = m.space();
    if !space.base().join(m.values().iter()).is_unit() {
        return None;
    }
    let core: Vec<usize> = (0..space.object_count())
        .filter(|&x| m.value(x).is_unit())
        .collect();
    Some(Filter::new(space, core).expect("unit set is non-empty when the join is the unit"))
}

/// An eventually periodic sequence: a finite prefix followed by a cycle
/// repeated forever. The only sequences with finitely representable tails.
#[derive(Clone, PartialEq, Eq)]
pub struct PeriodicSequence {
    space: Space,
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl PeriodicSequence {
    pub fn new(space: &Space, prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self, Error> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        for &x in prefix.iter().chain(&cycle) {
            if x >= space.object_count() {
                return Err(Error::IndexOutOfRange {
                    index: x,
                    count: space.object_count(),
                });
            }
        }
        Ok(PeriodicSequence {
            space: space.clone(),
            prefix,
            cycle,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// The tail filter of the sequence: its core is the set of objects
    /// visited by the cycle (the prefix is eventually left behind).
    pub fn filter(&self) -> Filter {
        Filter::new(&self.space, self.cycle.clone()).expect("cycle is non-empty")
    }

    /// Forward Cauchy: every ordered pair of cycle values occurs as
    /// `(x_n, x_m)` with `n <= m` infinitely often, so the tail condition
    /// collapses to all ordered pairs over the cycle set sitting at the
    /// unit.
    pub fn is_forward_cauchy(&self) -> bool {
        self.filter().is_cauchy()
    }
}

impl fmt::Debug for PeriodicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicSequence({:?}; {:?})", self.prefix, self.cycle)
    }
}
