//! Seeded random instances for the theorem suite and for tests: valid
//! spaces via min-plus closure, symmetric spaces, preorders, modules,
//! filters, and functors. Everything is deterministic for a fixed seed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::filter::Filter;
use crate::module::LeftModule;
use crate::quantale::{Base, CostValue, Value};
use crate::space::{nonexpansive_maps, Functor, Space};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The default sampling grid: a few finite rationals and infinity.
pub fn default_cost_grid() -> Vec<Value> {
    ["0", "1/3", "1/2", "1", "2", "inf"]
        .iter()
        .map(|s| Value::Cost(s.parse::<CostValue>().unwrap()))
        .collect()
}

fn object_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Path closure: repeatedly allow travel through intermediate points.
/// Together with a unit diagonal this forces both category axioms.
fn close_matrix(base: Base, hom: &mut [Vec<Value>]) {
    let n = hom.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = hom[i][k].tensor(&hom[k][j]);
                hom[i][j] = base.join([&hom[i][j], &via]);
            }
        }
    }
}

/// A valid random space: grid entries, unit diagonal, path closure.
pub fn random_space(rng: &mut ChaCha8Rng, base: Base, n: usize, grid: &[Value]) -> Space {
    let mut hom: Vec<Vec<Value>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        base.unit()
                    } else {
                        grid[rng.gen_range(0..grid.len())].clone()
                    }
                })
                .collect()
        })
        .collect();
    close_matrix(base, &mut hom);
    Space::new(base, object_names(n), hom).expect("generated spaces are well-formed")
}

/// A valid random symmetric space: mirrored entries, then closure (which
/// preserves symmetry).
pub fn random_symmetric_space(rng: &mut ChaCha8Rng, n: usize, grid: &[Value]) -> Space {
    let base = Base::Cost;
    let mut hom: Vec<Vec<Value>> = vec![vec![base.unit(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = grid[rng.gen_range(0..grid.len())].clone();
            hom[i][j] = v.clone();
            hom[j][i] = v;
        }
    }
    close_matrix(base, &mut hom);
    let space = Space::new(base, object_names(n), hom).expect("well-formed");
    debug_assert!(space.is_symmetric());
    space
}

/// A valid random preorder: random Boolean matrix, unit diagonal, and
/// transitive closure (the Boolean instance of the path closure).
pub fn random_preorder(rng: &mut ChaCha8Rng, n: usize) -> Space {
    let grid = [Value::Bool(false), Value::Bool(true)];
    random_space(rng, Base::Bool, n, &grid)
}

/// A non-empty random core.
pub fn random_filter(rng: &mut ChaCha8Rng, space: &Space) -> Filter {
    let n = space.object_count();
    assert!(n > 0, "filters need at least one object");
    let mut core: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if core.is_empty() {
        core.push(rng.gen_range(0..n));
    }
    Filter::new(space, core).expect("non-empty in-range core")
}

/// A random valid left module: sample a vector from the grid, then take
/// the best approximation from below, which always satisfies the module
/// inequality.
pub fn random_left_module(rng: &mut ChaCha8Rng, space: &Space, grid: &[Value]) -> LeftModule {
    let n = space.object_count();
    let base = space.base();
    let raw: Vec<Value> = (0..n)
        .map(|_| grid[rng.gen_range(0..grid.len())].clone())
        .collect();
    let values: Vec<Value> = (0..n)
        .map(|x| {
            let terms: Vec<Value> = (0..n)
                .map(|y| raw[y].tensor(space.hom(x, y)))
                .collect();
            base.join(terms.iter())
        })
        .collect();
    LeftModule::new(space, values).expect("the lower regularization is a valid module")
}

/// A uniformly chosen non-expansive map, if any exists.
pub fn random_functor(rng: &mut ChaCha8Rng, source: &Space, target: &Space) -> Option<Functor> {
    let maps = nonexpansive_maps(source, target);
    if maps.is_empty() {
        return None;
    }
    let map = maps[rng.gen_range(0..maps.len())].clone();
    Some(Functor::new(source.clone(), target.clone(), map).expect("enumerated map"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_spaces_are_valid() {
        let grid = default_cost_grid();
        let mut rng = rng(7);
        for i in 0..100 {
            let n = 1 + (i % 5);
            let space = random_space(&mut rng, Base::Cost, n, &grid);
            assert!(space.is_valid(), "invalid space at iteration {i}");
        }
    }

    #[test]
    fn generated_symmetric_spaces_are_valid_and_symmetric() {
        let grid = default_cost_grid();
        let mut rng = rng(11);
        for i in 0..60 {
            let n = 1 + (i % 4);
            let space = random_symmetric_space(&mut rng, n, &grid);
            assert!(space.is_valid());
            assert!(space.is_symmetric());
        }
    }

    #[test]
    fn generated_preorders_are_valid() {
        let mut rng = rng(13);
        for i in 0..60 {
            let n = 1 + (i % 5);
            let preorder = random_preorder(&mut rng, n);
            assert!(preorder.is_valid());
            assert_eq!(preorder.base(), Base::Bool);
        }
    }

    #[test]
    fn generated_modules_and_filters_are_valid() {
        let grid = default_cost_grid();
        let mut rng = rng(17);
        for i in 0..60 {
            let n = 1 + (i % 4);
            let space = random_space(&mut rng, Base::Cost, n, &grid);
            let module = random_left_module(&mut rng, &space, &grid);
            assert_eq!(module.values().len(), n);
            let filter = random_filter(&mut rng, &space);
            assert!(!filter.core().is_empty());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let grid = default_cost_grid();
        let mut a = rng(42);
        let mut b = rng(42);
        for _ in 0..10 {
            let s1 = random_space(&mut a, Base::Cost, 4, &grid);
            let s2 = random_space(&mut b, Base::Cost, 4, &grid);
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn random_functors_are_valid() {
        let grid = default_cost_grid();
        let mut r = rng(23);
        for _ in 0..30 {
            let a = random_space(&mut r, Base::Cost, 3, &grid);
            let b = random_space(&mut r, Base::Cost, 3, &grid);
            let f = random_functor(&mut r, &a, &b).expect("constants always qualify");
            assert!(f.is_valid());
        }
    }
}
