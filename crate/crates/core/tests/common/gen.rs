//! Random sites, precosheaves and bicomplexes from a seeded generator.

use std::collections::BTreeSet;
use std::sync::Arc;

use cosheaf::cech::constant_cosheaf;
use cosheaf::diagram::{lower_generator, nat_module, upper_generator, Precosheaf, PrecosheafMorphism};
use cosheaf::fincat::{Cover, FinCategory, FinSpace, Obj, Sieve};
use cosheaf::spectral::Bicomplex;
use cosheaf::{Int, Matrix, ModuleMap, PresentedModule, Ring};
use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Rng;

/// Reflexive-transitive closure of a random relation on `n` points; with
/// `antisymmetric` only pairs `i < j` are drawn, so the result is a partial
/// order.
pub fn random_order(rng: &mut Rng, n: usize, p: f64, antisymmetric: bool) -> Vec<Vec<bool>> {
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = i == j || ((i < j || !antisymmetric) && rng.gen_bool(p));
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    le
}

/// A two-level order: points `0..low` below points `low..n`, each pair
/// related with probability `p` (the pseudocircle is the complete case on
/// two plus two points).
fn random_crown(rng: &mut Rng, low: usize, n: usize, p: f64) -> Vec<Vec<bool>> {
    (0..n).map(|i| (0..n).map(|j| i == j || (i < low && j >= low && rng.gen_bool(p))).collect()).collect()
}

/// The down-set topology of a random preorder on one to five points, with
/// at most `max_opens` opens. Half of the orders have two levels, which is
/// where covers with nontrivial nerves come from.
pub fn random_space(rng: &mut Rng, max_opens: usize) -> FinSpace {
    loop {
        let n = rng.gen_range(1..=5);
        let (n, le) = if rng.gen_bool(0.5) {
            // two below two is the only crown with few enough opens for a loop
            let (low, n) = if rng.gen_bool(0.6) { (2, 4) } else { (rng.gen_range(1..n.max(2)), n.max(2)) };
            (n, random_crown(rng, low, n, 0.85))
        } else {
            let antisymmetric = rng.gen_bool(0.85);
            (n, random_order(rng, n, 0.45, antisymmetric))
        };
        let names = (0..n).map(|i| format!("x{i}")).collect();
        let x = FinSpace::from_preorder(names, |a, b| le[a][b]).expect("a preorder");
        if x.opens().len() <= max_opens {
            return x;
        }
    }
}

/// A random covering family of the open `u`: a few opens inside `u` (rarely
/// `u` itself), topped up with minimal opens until every point of `u` is
/// reached.
pub fn random_cover(rng: &mut Rng, x: &FinSpace, c: &FinCategory, u: Obj) -> Cover {
    let opens = x.opens();
    let target = &opens[u];
    let mut chosen: BTreeSet<Obj> = (0..opens.len())
        .filter(|&v| opens[v].is_subset(target) && rng.gen_bool(if v == u { 0.05 } else { 0.3 }))
        .collect();
    for p in target {
        if !chosen.iter().any(|&v| opens[v].contains(p)) {
            chosen.insert(x.open_index(x.minimal_open(*p)).expect("minimal opens are opens"));
        }
    }
    let legs = chosen.iter().map(|&v| c.hom(v, u)[0]).collect();
    Cover::new(c, u, legs).expect("legs end at u")
}

/// The sieve generated by a random family of arrows into `u`.
pub fn random_sieve(rng: &mut Rng, c: &FinCategory, u: Obj) -> Sieve {
    let legs: Vec<_> =
        c.morphisms_into(u).iter().copied().filter(|&f| rng.gen_bool(if c.is_identity(f) { 0.05 } else { 0.4 })).collect();
    Sieve::generated_by(c, u, &legs)
}

/// Number of elements of a finite module (`None` if infinite).
pub fn card(m: &PresentedModule) -> Option<u64> {
    let cf = m.canonicalize();
    match m.ring() {
        Ring::PrimeField(p) => Some(p.pow(cf.free_rank as u32)),
        _ => cf.order().and_then(|o| u64::try_from(o).ok()),
    }
}

pub fn max_card(a: &Precosheaf) -> u64 {
    a.values().iter().map(|v| card(v).unwrap_or(u64::MAX)).max().unwrap_or(1)
}

fn piece(rng: &mut Rng, ring: Ring) -> PresentedModule {
    match ring {
        Ring::PrimeField(_) => PresentedModule::free(ring, 1),
        _ => PresentedModule::cyclic(ring, *[2, 2, 3, 4].choose(rng).expect("nonempty")),
    }
}

/// An object with exactly one arrow to every object.
pub fn initial_object(c: &FinCategory) -> Option<Obj> {
    c.objects().find(|&i| c.objects().all(|o| c.hom(i, o).len() == 1))
}

/// `M` on every object except `skip`, where it is zero; identities between
/// the copies of `M`. For `skip` the empty open this is the constant cosheaf.
pub fn constant_away_from(c: &Arc<FinCategory>, m: &PresentedModule, skip: Obj) -> Precosheaf {
    let z = PresentedModule::zero(m.ring());
    let values: Vec<PresentedModule> = c.objects().map(|o| if o == skip { z.clone() } else { m.clone() }).collect();
    let maps = c
        .morphisms()
        .map(|f| {
            let (a, b) = (&values[c.dom(f)], &values[c.cod(f)]);
            if c.dom(f) == skip || c.cod(f) == skip {
                ModuleMap::zero(a, b)
            } else {
                ModuleMap::identity(m)
            }
        })
        .collect();
    Precosheaf::new(c.clone(), m.ring(), values, maps).expect("a subfunctor of the constant precosheaf")
}

fn generator(rng: &mut Rng, c: &Arc<FinCategory>, space: Option<&FinSpace>, ring: Ring) -> Precosheaf {
    let v = rng.gen_range(0..c.num_objects());
    let m = piece(rng, ring);
    match rng.gen_range(0..10) {
        0..=4 => match (space, initial_object(c)) {
            (Some(x), _) if rng.gen_bool(0.7) => constant_cosheaf(x, &m),
            (_, Some(i)) if c.num_objects() > 1 && rng.gen_bool(0.7) => constant_away_from(c, &m, i),
            _ => Precosheaf::constant(c.clone(), &m),
        },
        5..=7 => lower_generator(c.clone(), v, &m),
        _ => upper_generator(c.clone(), v, &m),
    }
}

/// A random natural transformation, from small coordinates in `Nat(a, b)`.
pub fn random_morphism(rng: &mut Rng, a: &Precosheaf, b: &Precosheaf) -> PrecosheafMorphism {
    let nat = nat_module(a, b).expect("same category");
    let v: Vec<Int> = (0..nat.module.generators()).map(|_| Int::from(rng.gen_range(-2..=2))).collect();
    nat.to_morphism(&v)
}

/// A finite precosheaf whose values have at most `bound` elements: a sum
/// of constant pieces (the constant cosheaf when `c` is the open category of
/// `space`) and generators `M_V`, `M^V` with cyclic `M`, possibly replaced
/// by the cokernel or kernel of a random morphism.
pub fn random_precosheaf(rng: &mut Rng, c: &Arc<FinCategory>, space: Option<&FinSpace>, ring: Ring, bound: u64) -> Precosheaf {
    let mut a = Precosheaf::zero(c.clone(), ring);
    for _ in 0..rng.gen_range(1..=3) {
        let g = generator(rng, c, space, ring);
        let (sum, _, _) = Precosheaf::direct_sum(c.clone(), ring, &[a.clone(), g]).expect("same category");
        if max_card(&sum) <= bound {
            a = sum;
        }
    }
    match rng.gen_range(0..3) {
        0 => {
            let g = generator(rng, c, space, ring);
            random_morphism(rng, &g, &a).cokernel().0
        }
        1 => {
            let g = generator(rng, c, space, ring);
            random_morphism(rng, &a, &g).kernel().0
        }
        _ => a,
    }
}

/// Generators placed at positions of an `(S+1) × (T+1)` grid, with
/// horizontal and vertical arrows between them.
struct Blocks {
    s_max: usize,
    t_max: usize,
    at: Vec<(usize, usize)>,
    d: Vec<(usize, usize, i64)>,
    delta: Vec<(usize, usize, i64)>,
}

impl Blocks {
    fn gen(&mut self, s: usize, t: usize) -> usize {
        self.at.push((s, t));
        self.at.len() - 1
    }
}

fn weight(rng: &mut Rng, ring: Ring) -> i64 {
    match ring {
        Ring::PrimeField(p) => rng.gen_range(1..p as i64),
        _ => *[1, 1, 1, -1, 2, 3].choose(rng).expect("nonempty"),
    }
}

/// A random first-quadrant bicomplex with `S, T ≤ 4` over the given ring:
/// a direct sum of single generators, acyclic pairs and squares, and
/// staircases (which carry higher differentials), in a random basis.
pub fn random_bicomplex(rng: &mut Rng, ring: Ring) -> Bicomplex {
    let (s_max, t_max) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
    let mut b = Blocks { s_max, t_max, at: Vec::new(), d: Vec::new(), delta: Vec::new() };
    for _ in 0..rng.gen_range(1..=6) {
        let (s, t) = (rng.gen_range(0..=s_max), rng.gen_range(0..=t_max));
        let kind = rng.gen_range(0..8).min(4);
        let x = b.gen(s, t);
        match kind {
            1 if s >= 1 => {
                let y = b.gen(s - 1, t);
                b.d.push((x, y, weight(rng, ring)));
            }
            2 if t >= 1 => {
                let y = b.gen(s, t - 1);
                b.delta.push((x, y, weight(rng, ring)));
            }
            3 if s >= 1 && t >= 1 => {
                let (y, z, w) = (b.gen(s - 1, t), b.gen(s, t - 1), b.gen(s - 1, t - 1));
                let (p, q) = (weight(rng, ring), weight(rng, ring));
                b.d.extend([(x, y, p), (z, w, p)]);
                b.delta.extend([(x, z, q), (y, w, q)]);
            }
            4 if s >= 1 && t < t_max => {
                // tops T_i at (s−i, t+i); d T_i and δ T_{i+1} share a corner
                let k = rng.gen_range(1..=s.min(t_max - t));
                let mut top = x;
                for i in 0..k {
                    let corner = b.gen(s - i - 1, t + i);
                    let next = b.gen(s - i - 1, t + i + 1);
                    b.d.push((top, corner, weight(rng, ring)));
                    b.delta.push((next, corner, weight(rng, ring)));
                    top = next;
                }
                if t >= 1 && rng.gen_bool(0.6) {
                    let head = b.gen(s, t - 1);
                    b.delta.push((x, head, weight(rng, ring)));
                }
                if s > k && rng.gen_bool(0.6) {
                    let tail = b.gen(s - k - 1, t + k);
                    b.d.push((top, tail, weight(rng, ring)));
                }
            }
            _ => {}
        }
    }
    assemble(rng, ring, &b)
}

/// A random unimodular matrix with its inverse.
fn unimodular(rng: &mut Rng, n: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let (mut q, mut qi) = (id.clone(), id);
    if n < 2 {
        return (q, qi);
    }
    for _ in 0..n + 1 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        // q ← (1 + c e_ij) q, qi ← qi (1 − c e_ij)
        for k in 0..n {
            q[i][k] += c * q[j][k];
        }
        for row in qi.iter_mut() {
            row[j] -= c * row[i];
        }
    }
    (q, qi)
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    a.iter().map(|r| (0..cols).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
}

fn assemble(rng: &mut Rng, ring: Ring, b: &Blocks) -> Bicomplex {
    let (s_max, t_max) = (b.s_max, b.t_max);
    // local index of each generator inside its entry
    let mut count = vec![vec![0usize; t_max + 1]; s_max + 1];
    let local: Vec<usize> = b
        .at
        .iter()
        .map(|&(s, t)| {
            count[s][t] += 1;
            count[s][t] - 1
        })
        .collect();
    let blank = |s: usize, t: usize, s2: usize, t2: usize| vec![vec![0i64; count[s2][t2]]; count[s][t]];
    let mut hmat: Vec<Vec<Vec<Vec<i64>>>> = (1..=s_max).map(|s| (0..=t_max).map(|t| blank(s, t, s - 1, t)).collect()).collect();
    let mut vmat: Vec<Vec<Vec<Vec<i64>>>> = (0..=s_max).map(|s| (1..=t_max).map(|t| blank(s, t, s, t - 1)).collect()).collect();
    for &(x, y, w) in &b.d {
        let (s, t) = b.at[x];
        hmat[s - 1][t][local[x]][local[y]] += w;
    }
    for &(x, y, w) in &b.delta {
        let (s, t) = b.at[x];
        vmat[s][t - 1][local[x]][local[y]] += w;
    }
    let bases: Vec<Vec<_>> = (0..=s_max).map(|s| (0..=t_max).map(|t| unimodular(rng, count[s][t])).collect()).collect();
    let to_matrix = |m: Vec<Vec<i64>>, cols: usize| {
        let rows = m
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| match ring {
                        Ring::PrimeField(p) => Int::from(v.rem_euclid(p as i64)),
                        _ => Int::from(v),
                    })
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows, cols)
    };
    let entries: Vec<Vec<PresentedModule>> =
        (0..=s_max).map(|s| (0..=t_max).map(|t| PresentedModule::free(ring, count[s][t])).collect()).collect();
    // in the new bases the map x ↦ xM becomes Q_src · M · Q_dst⁻¹
    let conj = |m: &[Vec<i64>], src: (usize, usize), dst: (usize, usize)| {
        let cols = count[dst.0][dst.1];
        let left = mul(&bases[src.0][src.1].0, m, cols);
        to_matrix(mul(&left, &bases[dst.0][dst.1].1, cols), cols)
    };
    let horizontal = (1..=s_max)
        .map(|s| {
            (0..=t_max)
                .map(|t| {
                    let m = conj(&hmat[s - 1][t], (s, t), (s - 1, t));
                    ModuleMap::new(entries[s][t].clone(), entries[s - 1][t].clone(), m).expect("free modules")
                })
                .collect()
        })
        .collect();
    let vertical = (0..=s_max)
        .map(|s| {
            (1..=t_max)
                .map(|t| {
                    let m = conj(&vmat[s][t - 1], (s, t), (s, t - 1));
                    ModuleMap::new(entries[s][t].clone(), entries[s][t - 1].clone(), m).expect("free modules")
                })
                .collect()
        })
        .collect();
    Bicomplex::new(ring, entries, horizontal, vertical).expect("blocks form a bicomplex")
}
