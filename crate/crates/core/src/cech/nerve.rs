//! Index data of the Roos and Čech complexes: the summands of each degree
//! (an object of the site per summand) and the face maps between them.

use std::collections::HashMap;

use super::complex::{ChainComplex, CochainComplex};
use super::CechError;
use crate::diagram::{Precosheaf, PrecosheafMorphism, Presheaf};
use crate::fincat::{CategoryError, Cone, Cover, FinCategory, Mor, Obj, Sieve};
use crate::kmod::{block_map, direct_sum, sign_of, DirectSum, Matrix, ModuleMap, PresentedModule};

/// Summands and faces of a semi-simplicial object in the site.
///
/// `faces[n][c]` lists `(k, target, σ)` for the summand `c` of degree
/// `n + 1`: its `k`-th face is summand `target` of degree `n`, reached along
/// `σ: object(c) → object(target)`. Degenerate faces of a normalized index
/// are simply absent.
#[derive(Clone, Debug)]
pub(crate) struct NerveIndex<K> {
    pub keys: Vec<Vec<K>>,
    pub objects: Vec<Vec<Obj>>,
    pub faces: Vec<Vec<Vec<(usize, usize, Mor)>>>,
}

/// A map between two nerve indices of the same length: each summand goes
/// to at most one summand, along a morphism, with a sign.
#[derive(Clone, Debug)]
pub(crate) struct NerveMap {
    pub parts: Vec<Vec<Option<(usize, Mor, i64)>>>,
}

/// How much of the nerve is kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Reduction {
    /// Every chain or tuple, exactly as defined.
    Full,
    /// Roos: chains without identities before the last arrow.
    /// Čech: strictly increasing tuples (valid when every leg is mono).
    Reduced,
}

impl<K: Clone + Eq + std::hash::Hash> NerveIndex<K> {
    fn from_keys(keys: Vec<Vec<K>>, object: impl Fn(&K) -> Obj, faces: impl Fn(&K, &HashMap<K, usize>) -> Vec<(usize, usize, Mor)>) -> Self {
        let lookup: Vec<HashMap<K, usize>> =
            keys.iter().map(|ks| ks.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect()).collect();
        let objects = keys.iter().map(|ks| ks.iter().map(&object).collect()).collect();
        let faces = (1..keys.len()).map(|n| keys[n].iter().map(|k| faces(k, &lookup[n - 1])).collect()).collect();
        NerveIndex { keys, objects, faces }
    }

    pub fn top(&self) -> usize {
        self.keys.len() - 1
    }

    fn sums(&self, value: impl Fn(Obj) -> PresentedModule, ring: crate::kmod::Ring) -> Vec<DirectSum> {
        self.objects
            .iter()
            .map(|os| direct_sum(ring, &os.iter().map(|&o| value(o)).collect::<Vec<_>>()).expect("same ring"))
            .collect()
    }

    /// `⊕ A(object)` per degree, `d = Σ (−1)^k A(σ)` on faces.
    pub fn chain_complex(&self, a: &Precosheaf) -> ChainComplex {
        let sums = self.sums(|o| a.value(o).clone(), a.ring());
        let boundaries = (0..self.top())
            .map(|n| {
                let blocks = self.faces[n].iter().enumerate().flat_map(|(c, fs)| {
                    fs.iter().map(move |&(k, t, s)| (c, t, a.map(s).matrix().clone(), sign_of(k)))
                });
                block_map(&sums[n + 1], &sums[n], blocks)
            })
            .collect();
        ChainComplex::new_unchecked(a.ring(), sums.into_iter().map(|s| s.module).collect(), boundaries)
    }

    /// Chain map `⊕ A(object) → ⊕ A'(object)` induced by a natural
    /// transformation, summand by summand.
    pub fn chain_map(&self, f: &PrecosheafMorphism) -> Vec<ModuleMap> {
        let ring = f.source.ring();
        let src = self.sums(|o| f.source.value(o).clone(), ring);
        let dst = self.sums(|o| f.target.value(o).clone(), ring);
        (0..=self.top())
            .map(|n| {
                let blocks = self.objects[n].iter().enumerate().map(|(c, &o)| (c, c, f.components[o].matrix().clone(), 1));
                block_map(&src[n], &dst[n], blocks)
            })
            .collect()
    }

    /// `∏ B(object)` per degree, `d = Σ (−1)^k B(σ)` on faces.
    pub fn cochain_complex(&self, b: &Presheaf) -> CochainComplex {
        let sums = self.sums(|o| b.value(o).clone(), b.ring());
        let coboundaries = (0..self.top())
            .map(|n| {
                let blocks = self.faces[n].iter().enumerate().flat_map(|(c, fs)| {
                    fs.iter().map(move |&(k, t, s)| (t, c, b.map(s).matrix().clone(), sign_of(k)))
                });
                block_map(&sums[n], &sums[n + 1], blocks)
            })
            .collect();
        CochainComplex::new_unchecked(b.ring(), sums.into_iter().map(|s| s.module).collect(), coboundaries)
    }
}

impl NerveMap {
    /// Matrix of the induced chain map in degree `n`, source `⊕ A`.
    pub fn chain_matrix<K1, K2>(&self, n: usize, a: &Precosheaf, src: &NerveIndex<K1>, dst: &NerveIndex<K2>) -> Matrix {
        let off = |os: &[Obj]| -> Vec<usize> {
            os.iter().scan(0, |acc, &o| {
                let v = *acc;
                *acc += a.value(o).generators();
                Some(v)
            }).collect()
        };
        let (so, to) = (off(&src.objects[n]), off(&dst.objects[n]));
        let rows: usize = src.objects[n].iter().map(|&o| a.value(o).generators()).sum();
        let cols: usize = dst.objects[n].iter().map(|&o| a.value(o).generators()).sum();
        let mut m = Matrix::zeros(rows, cols);
        for (c, part) in self.parts[n].iter().enumerate() {
            if let Some((t, s, sign)) = *part {
                m.add_block(so[c], to[t], a.map(s).matrix(), sign);
            }
        }
        m
    }
}

/// Chains `⟨i₀,…,i_n⟩`: `U₀ → U₁ → … → U_n → U` with `i_n ∈ R`, stored as
/// the list of arrows.
pub(crate) type Chain = Vec<Mor>;

pub(crate) fn roos_index(c: &FinCategory, r: &Sieve, top: usize, reduction: Reduction) -> NerveIndex<Chain> {
    let mut keys: Vec<Vec<Chain>> = vec![r.members().iter().map(|&m| vec![m]).collect()];
    for _ in 0..top {
        let prev = keys.last().expect("degree 0 present");
        let mut next = Vec::new();
        for ch in prev {
            for &h in c.morphisms_into(c.dom(ch[0])) {
                if reduction == Reduction::Reduced && c.is_identity(h) {
                    continue;
                }
                let mut e = Vec::with_capacity(ch.len() + 1);
                e.push(h);
                e.extend_from_slice(ch);
                next.push(e);
            }
        }
        next.sort();
        keys.push(next);
    }
    for ks in &mut keys {
        ks.sort();
    }
    NerveIndex::from_keys(
        keys,
        |ch| c.dom(ch[0]),
        |ch, lookup| {
            let n = ch.len() - 1;
            let mut out = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let (face, sigma) = if k == 0 {
                    (ch[1..].to_vec(), ch[0])
                } else {
                    let mut f = ch[..k - 1].to_vec();
                    f.push(c.compose(ch[k], ch[k - 1]));
                    f.extend_from_slice(&ch[k + 1..]);
                    (f, c.identity(c.dom(ch[0])))
                };
                if let Some(&t) = lookup.get(&face) {
                    out.push((k, t, sigma));
                }
            }
            out
        },
    )
}

/// Wide pullbacks of the legs of a cover, memoized per index tuple.
pub(crate) struct Pullbacks<'a> {
    c: &'a FinCategory,
    legs: Vec<Mor>,
    cache: HashMap<Vec<usize>, Cone>,
}

impl<'a> Pullbacks<'a> {
    pub fn new(c: &'a FinCategory, legs: &[Mor]) -> Self {
        Pullbacks { c, legs: legs.to_vec(), cache: HashMap::new() }
    }

    pub fn get(&mut self, tuple: &[usize]) -> Result<Cone, CechError> {
        if let Some(cone) = self.cache.get(tuple) {
            return Ok(cone.clone());
        }
        let legs: Vec<Mor> = tuple.iter().map(|&j| self.legs[j]).collect();
        let cone = self.c.wide_pullback(&legs).ok_or_else(|| {
            let names: Vec<&str> = legs.iter().map(|&l| self.c.morphism_name(l)).collect();
            CechError::Category(CategoryError::MissingPullback(names.join(" ×_U ")))
        })?;
        self.cache.insert(tuple.to_vec(), cone.clone());
        Ok(cone)
    }

    /// The unique morphism `pb(big) → pb(small)` compatible with the
    /// projections selected by `positions` (`small[m] = big[positions[m]]`
    /// up to the leg factorizations `via[m]`, which map the legs of `big`
    /// into the legs of `small`).
    pub fn comparison(&self, big: &Cone, small: &Cone, positions: &[usize], via: &[Mor]) -> Mor {
        let src: Vec<Mor> = positions.iter().zip(via).map(|(&p, &v)| self.c.compose(v, big.projections[p])).collect();
        let found = self.c.factorizations(big.apex, small.apex, &src, &small.projections);
        debug_assert_eq!(found.len(), 1, "pullback comparison is unique");
        found[0]
    }
}

/// Every index tuple of length `n + 1` for `m` legs (increasing only, when
/// reduced).
fn tuples(m: usize, len: usize, reduction: Reduction) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &out {
            let start = match (reduction, t.last()) {
                (Reduction::Reduced, Some(&l)) => l + 1,
                _ => 0,
            };
            for j in start..m {
                let mut e = t.clone();
                e.push(j);
                next.push(e);
            }
        }
        out = next;
    }
    out
}

pub(crate) fn cech_index(c: &FinCategory, cover: &Cover, top: usize, reduction: Reduction) -> Result<(NerveIndex<Vec<usize>>, Vec<Vec<Cone>>), CechError> {
    let m = cover.legs().len();
    let mut pb = Pullbacks::new(c, cover.legs());
    let keys: Vec<Vec<Vec<usize>>> = (0..=top).map(|n| tuples(m, n + 1, reduction)).collect();
    let mut cones = Vec::with_capacity(keys.len());
    for ks in &keys {
        cones.push(ks.iter().map(|t| pb.get(t)).collect::<Result<Vec<_>, _>>()?);
    }
    let lookup: Vec<HashMap<&Vec<usize>, usize>> =
        keys.iter().map(|ks| ks.iter().enumerate().map(|(i, k)| (k, i)).collect()).collect();
    let mut faces = Vec::with_capacity(top);
    for n in 0..top {
        let mut level = Vec::with_capacity(keys[n + 1].len());
        for (ci, t) in keys[n + 1].iter().enumerate() {
            let mut fs = Vec::with_capacity(t.len());
            for k in 0..t.len() {
                let mut face = t.clone();
                face.remove(k);
                let ti = lookup[n][&face];
                let positions: Vec<usize> = (0..t.len()).filter(|&p| p != k).collect();
                let via: Vec<Mor> = positions.iter().map(|&p| c.identity(c.dom(cover.legs()[t[p]]))).collect();
                let sigma = pb.comparison(&cones[n + 1][ci], &cones[n][ti], &positions, &via);
                fs.push((k, ti, sigma));
            }
            level.push(fs);
        }
        faces.push(level);
    }
    let objects = cones.iter().map(|cs| cs.iter().map(|cone| cone.apex).collect()).collect();
    Ok((NerveIndex { keys, objects, faces }, cones))
}

/// Sign of the permutation sorting `t` (entries distinct).
fn sort_sign(t: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[i] > t[j] {
                inv += 1;
            }
        }
    }
    sign_of(inv)
}

/// Chain map between Čech nerves induced by a refinement `λ` of `fine`
/// into `coarse`: `refinement[j] = (λ(j), φ_j)` with `coarse_λ(j) ∘ φ_j = fine_j`.
pub(crate) fn refinement_map(
    c: &FinCategory,
    fine: (&NerveIndex<Vec<usize>>, &[Vec<Cone>]),
    coarse: (&NerveIndex<Vec<usize>>, &[Vec<Cone>], &Cover),
    refinement: &[(usize, Mor)],
    reduction: Reduction,
) -> NerveMap {
    let (fi, fcones) = fine;
    let (ci, ccones, ccover) = coarse;
    let pb = Pullbacks::new(c, ccover.legs());
    let parts = (0..=fi.top())
        .map(|n| {
            let lookup: HashMap<&Vec<usize>, usize> = ci.keys[n].iter().enumerate().map(|(i, k)| (k, i)).collect();
            fi.keys[n]
                .iter()
                .enumerate()
                .map(|(s, t)| {
                    let image: Vec<usize> = t.iter().map(|&j| refinement[j].0).collect();
                    let (target, sign, order) = match reduction {
                        Reduction::Full => (image.clone(), 1, (0..t.len()).collect::<Vec<_>>()),
                        Reduction::Reduced => {
                            let mut sorted = image.clone();
                            sorted.sort();
                            sorted.dedup();
                            if sorted.len() < image.len() {
                                return None;
                            }
                            let order: Vec<usize> = sorted.iter().map(|x| image.iter().position(|y| y == x).unwrap()).collect();
                            (sorted, sort_sign(&image), order)
                        }
                    };
                    let ti = lookup[&target];
                    let via: Vec<Mor> = order.iter().map(|&p| refinement[t[p]].1).collect();
                    let sigma = pb.comparison(&fcones[n][s], &ccones[n][ti], &order, &via);
                    Some((ti, sigma, sign))
                })
                .collect()
        })
        .collect();
    NerveMap { parts }
}

/// Inclusion of Roos nerves for sieves `small ⊆ big`.
pub(crate) fn sieve_inclusion(c: &FinCategory, small: &NerveIndex<Chain>, big: &NerveIndex<Chain>) -> NerveMap {
    let parts = (0..small.keys.len())
        .map(|n| {
            let lookup: HashMap<&Chain, usize> = big.keys[n].iter().enumerate().map(|(i, k)| (k, i)).collect();
            small.keys[n].iter().map(|ch| Some((lookup[ch], c.identity(c.dom(ch[0])), 1))).collect()
        })
        .collect();
    NerveMap { parts }
}
