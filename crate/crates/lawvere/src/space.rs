//! Finite enriched categories over a base quantale — quasi-metric spaces
//! on the cost base, preorders on the Boolean base — and the enriched
//! functors (non-expansive, respectively monotone, maps) between them.

use std::fmt;
use std::sync::Arc;

use crate::quantale::{Base, Value};
use crate::Error;

/// A finite enriched category: named objects plus a hom matrix read as
/// `hom[x][y] = A(x, y)`.
///
/// Construction checks well-formedness only (square matrix, distinct
/// names, one base throughout); whether the identity and composition
/// axioms hold is reported by [`Space::validate`]. Objects are addressed
/// by index everywhere, names are metadata. The handle is cheap to clone,
/// immutable, and freely shareable across threads.
#[derive(Clone)]
pub struct Space {
    inner: Arc<Inner>,
}

struct Inner {
    base: Base,
    objects: Vec<String>,
    hom: Vec<Vec<Value>>,
}

impl Space {
    pub fn new(base: Base, objects: Vec<String>, hom: Vec<Vec<Value>>) -> Result<Self, Error> {
        let n = objects.len();
        for (i, name) in objects.iter().enumerate() {
            if objects[..i].contains(name) {
                return Err(Error::DuplicateObject(name.clone()));
            }
        }
        if hom.len() != n {
            return Err(Error::MatrixShape {
                expected: n,
                got: hom.len(),
            });
        }
        for row in &hom {
            if row.len() != n {
                return Err(Error::MatrixShape {
                    expected: n,
                    got: row.len(),
                });
            }
            for v in row {
                if v.base() != base {
                    return Err(Error::BaseMismatch {
                        expected: base,
                        got: v.base(),
                    });
                }
            }
        }
        Ok(Space {
            inner: Arc::new(Inner { base, objects, hom }),
        })
    }

    /// Builds a space from a distance function on indices.
    pub fn from_fn(
        base: Base,
        objects: Vec<String>,
        mut f: impl FnMut(usize, usize) -> Value,
    ) -> Result<Self, Error> {
        let n = objects.len();
        let hom = (0..n)
            .map(|x| (0..n).map(|y| f(x, y)).collect())
            .collect();
        Space::new(base, objects, hom)
    }

    /// Parses a cost-valued matrix given as rows of value strings.
    pub fn cost(objects: &[&str], rows: &[&[&str]]) -> Result<Self, Error> {
        Space::from_text(Base::Cost, objects, rows)
    }

    /// Parses a Boolean matrix given as rows of `"0"`/`"1"` strings.
    pub fn preorder(objects: &[&str], rows: &[&[&str]]) -> Result<Self, Error> {
        Space::from_text(Base::Bool, objects, rows)
    }

    fn from_text(base: Base, objects: &[&str], rows: &[&[&str]]) -> Result<Self, Error> {
        let objects: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
        let mut hom = Vec::with_capacity(rows.len());
        for row in rows {
            let mut parsed = Vec::with_capacity(row.len());
            for s in *row {
                parsed.push(base.parse_value(s)?);
            }
            hom.push(parsed);
        }
        Space::new(base, objects, hom)
    }

    pub fn base(&self) -> Base {
        self.inner.base
    }

    pub fn object_count(&self) -> usize {
        self.inner.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.inner.objects
    }

    pub fn name(&self, x: usize) -> &str {
        &self.inner.objects[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.inner.objects.iter().position(|o| o == name)
    }

    /// The hom value `A(x, y)`.
    pub fn hom(&self, x: usize, y: usize) -> &Value {
        &self.inner.hom[x][y]
    }

    pub fn hom_matrix(&self) -> &[Vec<Value>] {
        &self.inner.hom
    }

    /// Checks the identity axiom `A(x, x) = unit` and the composition
    /// axiom `A(y, z) (x) A(x, y)  entails  A(x, z)` on every triple,
    /// listing each violation.
    pub fn validate(&self) -> CategoryReport {
        let n = self.object_count();
        let mut violations = Vec::new();
        for x in 0..n {
            if !self.hom(x, x).is_unit() {
                violations.push(CategoryViolation::Identity {
                    x,
                    found: self.hom(x, x).clone(),
                });
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let via = self.hom(y, z).tensor(self.hom(x, y));
                    if !via.entails(self.hom(x, z)) {
                        violations.push(CategoryViolation::Triangle {
                            x,
                            y,
                            z,
                            via,
                            direct: self.hom(x, z).clone(),
                        });
                    }
                }
            }
        }
        CategoryReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().violations.is_empty()
    }

    /// Transposed hom matrix.
    pub fn opposite(&self) -> Space {
        Space::from_fn(self.base(), self.objects().to_vec(), |x, y| {
            self.hom(y, x).clone()
        })
        .expect("transpose of a well-formed space is well-formed")
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.object_count();
        (0..n).all(|x| (x + 1..n).all(|y| self.hom(x, y) == self.hom(y, x)))
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.base == other.inner.base
                && self.inner.objects == other.inner.objects
                && self.inner.hom == other.inner.hom)
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({}; {:?})", self.inner.base, self.inner.objects)
    }
}

/// Outcome of [`Space::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryReport {
    pub violations: Vec<CategoryViolation>,
}

impl CategoryReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    /// `A(x, x)` is not the unit.
    Identity { x: usize, found: Value },
    /// `A(y, z) (x) A(x, y)` does not entail `A(x, z)`.
    Triangle {
        x: usize,
        y: usize,
        z: usize,
        via: Value,
        direct: Value,
    },
}

impl fmt::Display for CategoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryViolation::Identity { x, found } => {
                write!(f, "identity fails at object {x}: A(x,x) = {found}")
            }
            CategoryViolation::Triangle { x, y, z, via, direct } => write!(
                f,
                "composition fails at ({x},{y},{z}): via = {via}, direct = {direct}"
            ),
        }
    }
}

/// An enriched functor: a base-preserving assignment of objects that is
/// non-expansive (cost) or monotone (Boolean).
///
/// As with spaces, construction checks well-formedness; non-expansiveness
/// is reported by [`Functor::validate`].
#[derive(Clone, PartialEq, Eq)]
pub struct Functor {
    source: Space,
    target: Space,
    map: Vec<usize>,
}

impl Functor {
    pub fn new(source: Space, target: Space, map: Vec<usize>) -> Result<Self, Error> {
        if source.base() != target.base() {
            return Err(Error::BaseMismatch {
                expected: source.base(),
                got: target.base(),
            });
        }
        if map.len() != source.object_count() {
            return Err(Error::LengthMismatch {
                expected: source.object_count(),
                got: map.len(),
            });
        }
        for &b in &map {
            if b >= target.object_count() {
                return Err(Error::IndexOutOfRange {
                    index: b,
                    count: target.object_count(),
                });
            }
        }
        Ok(Functor { source, target, map })
    }

    pub fn identity(space: &Space) -> Functor {
        Functor {
            source: space.clone(),
            target: space.clone(),
            map: (0..space.object_count()).collect(),
        }
    }

    pub fn constant(source: &Space, target: &Space, b: usize) -> Result<Functor, Error> {
        Functor::new(
            source.clone(),
            target.clone(),
            vec![b; source.object_count()],
        )
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Lists every pair where `A(x, y)` fails to entail `B(Fx, Fy)`.
    pub fn validate(&self) -> FunctorReport {
        let mut violations = Vec::new();
        let n = self.source.object_count();
        for x in 0..n {
            for y in 0..n {
                let a = self.source.hom(x, y);
                let b = self.target.hom(self.map[x], self.map[y]);
                if !a.entails(b) {
                    violations.push(FunctorViolation {
                        x,
                        y,
                        source_hom: a.clone(),
                        target_hom: b.clone(),
                    });
                }
            }
        }
        FunctorReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().violations.is_empty()
    }

    /// Composition `other . self` (apply `self` first).
    pub fn then(&self, other: &Functor) -> Result<Functor, Error> {
        if self.target != other.source {
            return Err(Error::FunctorMismatch);
        }
        Functor::new(
            self.source.clone(),
            other.target.clone(),
            self.map.iter().map(|&x| other.map[x]).collect(),
        )
    }
}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functor({:?})", self.map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorReport {
    pub violations: Vec<FunctorViolation>,
}

impl FunctorReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorViolation {
    pub x: usize,
    pub y: usize,
    pub source_hom: Value,
    pub target_hom: Value,
}

impl fmt::Display for FunctorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "expansion at ({}, {}): A = {}, B = {}",
            self.x, self.y, self.source_hom, self.target_hom
        )
    }
}

/// Distance between two parallel functors in the function space `[A, B]`:
/// the meet over source objects of `B(f x, g x)`.
pub fn function_space_distance(f: &Functor, g: &Functor) -> Result<Value, Error> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::SpaceMismatch);
    }
    for h in [f, g] {
        let report = h.validate();
        if !report.is_valid() {
            return Err(Error::InvalidFunctor(report));
        }
    }
    Ok(distance_of_assignments(
        &f.target,
        f.source.object_count(),
        &f.map,
        &g.map,
    ))
}

/// Same as [`function_space_distance`] on raw assignment vectors; no
/// validity check, used by the enumeration machinery.
pub(crate) fn distance_of_assignments(
    target: &Space,
    source_len: usize,
    f: &[usize],
    g: &[usize],
) -> Value {
    let values: Vec<&Value> = (0..source_len).map(|x| target.hom(f[x], g[x])).collect();
    target.base().meet(values.into_iter())
}

/// Enumerates every non-expansive (monotone) assignment `source -> target`
/// in lexicographic order, pruning prefixes that already expand a hom.
pub fn nonexpansive_maps(source: &Space, target: &Space) -> Vec<Vec<usize>> {
    let n = source.object_count();
    let m = target.object_count();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    if m == 0 {
        return out;
    }
    let mut partial: Vec<usize> = Vec::with_capacity(n);
    fn extend_ok(source: &Space, target: &Space, partial: &[usize], next: usize) -> bool {
        let k = partial.len();
        for (i, &fi) in partial.iter().enumerate() {
            if !source.hom(i, k).entails(target.hom(fi, next)) {
                return false;
            }
            if !source.hom(k, i).entails(target.hom(next, fi)) {
                return false;
            }
        }
        source.hom(k, k).entails(target.hom(next, next))
    }
    fn rec(
        source: &Space,
        target: &Space,
        partial: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if partial.len() == source.object_count() {
            out.push(partial.clone());
            return;
        }
        for b in 0..target.object_count() {
            if extend_ok(source, target, partial, b) {
                partial.push(b);
                rec(source, target, partial, out);
                partial.pop();
            }
        }
    }
    rec(source, target, &mut partial, &mut out);
    out
}

/// Builds the function space `[A, B]` as a space in its own right, with
/// one object per non-expansive map named `[t0,t1,...]` by target names.
pub fn function_space(a: &Space, b: &Space) -> Result<Space, Error> {
    if a.base() != b.base() {
        return Err(Error::BaseMismatch {
            expected: a.base(),
            got: b.base(),
        });
    }
    let maps = nonexpansive_maps(a, b);
    let names: Vec<String> = maps
        .iter()
        .map(|m| {
            let targets: Vec<&str> = m.iter().map(|&t| b.name(t)).collect();
            format!("[{}]", targets.join(","))
        })
        .collect();
    Space::from_fn(a.base(), names, |i, j| {
        distance_of_assignments(b, a.object_count(), &maps[i], &maps[j])
    })
}
