use std::collections::BTreeSet;

use serde::Serialize;

use super::complex::{ChainComplex, CochainComplex, Homology};
use super::nerve::{cech_index, refinement_map, roos_index, sieve_inclusion, NerveIndex, NerveMap, Reduction};
use super::CechError;
use crate::diagram::{Precosheaf, PrecosheafMorphism, Presheaf};
use crate::fincat::{Cover, FinCategory, Obj, Sieve, Site};
use crate::kmod::{block_map, direct_sum, ModuleMap, PresentedModule};

/// Which family the Čech limit runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Via {
    Covers,
    Sieves,
}

fn check_sieve(c: &FinCategory, r: &Sieve) -> Result<(), CechError> {
    if r.target() >= c.num_objects() {
        return Err(CechError::SieveMismatch(format!("target {} outside the category", r.target())));
    }
    Sieve::new(c, r.target(), r.members().iter().copied())
        .map(|_| ())
        .map_err(|e| CechError::SieveMismatch(e.to_string()))
}

fn check_cover(c: &FinCategory, cover: &Cover) -> Result<(), CechError> {
    Cover::new(c, cover.target(), cover.legs().to_vec()).map(|_| ()).map_err(|e| CechError::SieveMismatch(e.to_string()))
}

fn all_mono(c: &FinCategory, cover: &Cover) -> bool {
    cover.legs().iter().all(|&l| c.is_mono(l))
}

/// The Roos chain complex `⊕_{⟨i₀,…,i_n⟩} A(U₀)` in degrees `0..=n_max`,
/// every chain kept (degenerate ones included).
pub fn roos_chain_complex(r: &Sieve, a: &Precosheaf, n_max: usize) -> Result<ChainComplex, CechError> {
    check_sieve(a.category(), r)?;
    Ok(roos_index(a.category(), r, n_max, Reduction::Full).chain_complex(a))
}

/// The Roos cochain complex `∏_{⟨i₀,…,i_n⟩} B(U₀)`.
pub fn roos_cochain_complex(r: &Sieve, b: &Presheaf, n_max: usize) -> Result<CochainComplex, CechError> {
    check_sieve(b.category(), r)?;
    Ok(roos_index(b.category(), r, n_max, Reduction::Full).cochain_complex(b))
}

/// The Čech chain complex `⊕_{i₀…i_n} A(U_{i₀} ×_U … ×_U U_{i_n})`, over
/// every index tuple.
pub fn cech_chain_complex(cover: &Cover, a: &Precosheaf, n_max: usize) -> Result<ChainComplex, CechError> {
    check_cover(a.category(), cover)?;
    Ok(cech_index(a.category(), cover, n_max, Reduction::Full)?.0.chain_complex(a))
}

/// The chain map between full Čech complexes induced by `f: A → A'`.
pub fn cech_chain_map(cover: &Cover, f: &PrecosheafMorphism, n_max: usize) -> Result<Vec<ModuleMap>, CechError> {
    check_cover(f.source.category(), cover)?;
    Ok(cech_index(f.source.category(), cover, n_max, Reduction::Full)?.0.chain_map(f))
}

/// The Čech cochain complex `∏_{i₀…i_n} B(U_{i₀} ×_U … ×_U U_{i_n})`.
pub fn cech_cochain_complex(cover: &Cover, b: &Presheaf, n_max: usize) -> Result<CochainComplex, CechError> {
    check_cover(b.category(), cover)?;
    Ok(cech_index(b.category(), cover, n_max, Reduction::Full)?.0.cochain_complex(b))
}

/// Normalized Roos complex: chains with an identity before the last arrow
/// span a subcomplex with zero homology, so they are dropped.
pub(crate) fn roos_reduced(r: &Sieve, a: &Precosheaf, n_max: usize) -> (NerveIndex<Vec<usize>>, ChainComplex) {
    let idx = roos_index(a.category(), r, n_max, Reduction::Reduced);
    let cx = idx.chain_complex(a);
    (idx, cx)
}

/// Čech complex over increasing tuples when every leg is mono (the
/// alternating complex), over all tuples otherwise.
pub(crate) fn cech_reduced(c: &FinCategory, cover: &Cover, n_max: usize) -> Result<(NerveIndex<Vec<usize>>, Vec<Vec<crate::fincat::Cone>>, Reduction), CechError> {
    let red = if all_mono(c, cover) { Reduction::Reduced } else { Reduction::Full };
    let (idx, cones) = cech_index(c, cover, n_max, red)?;
    Ok((idx, cones, red))
}

/// `H_n(R, A)`, the homology of the Roos complex.
pub fn h_n_sieve(r: &Sieve, a: &Precosheaf, n: usize) -> Result<PresentedModule, CechError> {
    check_sieve(a.category(), r)?;
    Ok(roos_reduced(r, a, n + 1).1.homology(n)?.module)
}

/// `H^n(R, B)`, the cohomology of the Roos cochain complex.
pub fn h_upper_n_sieve(r: &Sieve, b: &Presheaf, n: usize) -> Result<PresentedModule, CechError> {
    check_sieve(b.category(), r)?;
    let idx = roos_index(b.category(), r, n + 1, Reduction::Reduced);
    Ok(idx.cochain_complex(b).cohomology(n)?.module)
}

/// `H_n({U_i → U}, A)`, the homology of the Čech complex of a cover.
pub fn h_n_cover(cover: &Cover, a: &Precosheaf, n: usize) -> Result<PresentedModule, CechError> {
    check_cover(a.category(), cover)?;
    let (idx, _, _) = cech_reduced(a.category(), cover, n + 1)?;
    Ok(idx.chain_complex(a).homology(n)?.module)
}

/// `H^n({U_i → U}, B)`.
pub fn h_upper_n_cover(cover: &Cover, b: &Presheaf, n: usize) -> Result<PresentedModule, CechError> {
    check_cover(b.category(), cover)?;
    let (idx, _, _) = cech_reduced(b.category(), cover, n + 1)?;
    Ok(idx.cochain_complex(b).cohomology(n)?.module)
}

/// `Ȟ_n(U, A)` with a description of where the limit was read off.
#[derive(Clone, Debug)]
pub struct CechHomology {
    pub module: PresentedModule,
    /// Number of covers (or covering sieves) in the index family.
    pub family_size: usize,
    /// The initial member of the family, at which the limit is attained.
    pub initial: String,
}

/// `Ȟ_n(U, A) = lim H_n` over the covers (`Via::Covers`) or the covering
/// sieves (`Via::Sieves`) of `U`.
///
/// Both families are finite and codirected with an initial member — the
/// minimal covering sieve, resp. the cover by all of its arrows, which
/// refines every cover — and a limit over an index category with an
/// initial object is its value there. [`cech_h_n_exhaustive`] computes the
/// same limit from the whole diagram.
pub fn cech_h_n(site: &Site, u: Obj, a: &Precosheaf, n: usize, via: Via) -> Result<CechHomology, CechError> {
    let c = site.category();
    if **c != **a.category() {
        return Err(CechError::SieveMismatch("precosheaf lives on another category".into()));
    }
    let r = site.minimal_covering_sieve(u);
    match via {
        Via::Sieves => Ok(CechHomology {
            module: roos_reduced(&r, a, n + 1).1.homology(n)?.module,
            family_size: site.covering_sieves(u).len(),
            initial: site.describe(&r),
        }),
        Via::Covers => {
            let cover = Cover::new(c, u, r.members().iter().copied().collect())?;
            let family_size = site.covering_families(u)?.len();
            let (idx, _, _) = cech_reduced(c, &cover, n + 1)?;
            Ok(CechHomology {
                module: idx.chain_complex(a).homology(n)?.module,
                family_size,
                initial: site.describe(&r),
            })
        }
    }
}

/// `Ȟ^n(U, B) = colim H^n` over the covering sieves of `U`, attained at
/// the minimal covering sieve (terminal in the opposite order).
pub fn cech_h_upper_n(site: &Site, u: Obj, b: &Presheaf, n: usize) -> Result<PresentedModule, CechError> {
    h_upper_n_sieve(&site.minimal_covering_sieve(u), b, n)
}

/// The limit of a diagram of homology modules over a finite preorder given
/// by `le[i][j]` (`i → j`) and transition maps for those pairs. Only a
/// generating set of arrows is imposed: within each isomorphism class a
/// star around a representative, between classes the covering relations.
fn preorder_limit(ring: crate::kmod::Ring, values: &[PresentedModule], le: &[Vec<bool>], map: impl Fn(usize, usize) -> ModuleMap) -> PresentedModule {
    let m = values.len();
    let rep: Vec<usize> = (0..m).map(|i| (0..m).find(|&j| le[i][j] && le[j][i]).unwrap()).collect();
    let mut arrows: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..m {
        if rep[i] != i {
            arrows.insert((i, rep[i]));
            arrows.insert((rep[i], i));
        }
    }
    let reps: Vec<usize> = (0..m).filter(|&i| rep[i] == i).collect();
    for &i in &reps {
        for &j in &reps {
            if i != j && le[i][j] && !reps.iter().any(|&k| k != i && k != j && le[i][k] && le[k][j]) {
                arrows.insert((i, j));
            }
        }
    }
    let arrows: Vec<(usize, usize)> = arrows.into_iter().collect();
    let src = direct_sum(ring, values).expect("same ring");
    let tgts: Vec<PresentedModule> = arrows.iter().map(|&(_, j)| values[j].clone()).collect();
    let dst = direct_sum(ring, &tgts).expect("same ring");
    let blocks = arrows.iter().enumerate().flat_map(|(k, &(i, j))| {
        [(i, k, map(i, j).matrix().clone(), 1), (j, k, crate::kmod::Matrix::identity(values[j].generators()), -1)]
    });
    block_map(&src, &dst, blocks).kernel().0
}

/// `Ȟ_n(U, A)` as the limit of the whole diagram of `H_n` over the family,
/// with transition maps induced by sieve inclusions, resp. by chosen
/// refinements (any two choices are chain homotopic).
pub fn cech_h_n_exhaustive(site: &Site, u: Obj, a: &Precosheaf, n: usize, via: Via) -> Result<PresentedModule, CechError> {
    let c = site.category();
    let ring = a.ring();
    match via {
        Via::Sieves => {
            let sieves = site.covering_sieves(u);
            let built: Vec<_> = sieves.iter().map(|r| roos_reduced(r, a, n + 1)).collect();
            let hs: Vec<Homology> = built.iter().map(|(_, cx)| cx.homology(n)).collect::<Result<_, _>>()?;
            let le: Vec<Vec<bool>> = sieves.iter().map(|x| sieves.iter().map(|y| x.is_subset_of(y)).collect()).collect();
            let values: Vec<PresentedModule> = hs.iter().map(|h| h.module.clone()).collect();
            Ok(preorder_limit(ring, &values, &le, |i, j| {
                let f: NerveMap = sieve_inclusion(c, &built[i].0, &built[j].0);
                hs[i].induced(&hs[j], &f.chain_matrix(n, a, &built[i].0, &built[j].0))
            }))
        }
        Via::Covers => {
            let covers = site.covering_families(u)?;
            let red = if covers.iter().all(|cv| all_mono(c, cv)) { Reduction::Reduced } else { Reduction::Full };
            let mut built = Vec::with_capacity(covers.len());
            for cover in &covers {
                built.push(cech_index(c, cover, n + 1, red)?);
            }
            let hs: Vec<Homology> = built.iter().map(|(idx, _)| idx.chain_complex(a).homology(n)).collect::<Result<_, _>>()?;
            let refinements: Vec<Vec<Option<Vec<(usize, crate::fincat::Mor)>>>> =
                covers.iter().map(|x| covers.iter().map(|y| x.refinement(c, y)).collect()).collect();
            let le: Vec<Vec<bool>> = refinements.iter().map(|row| row.iter().map(|r| r.is_some()).collect()).collect();
            let values: Vec<PresentedModule> = hs.iter().map(|h| h.module.clone()).collect();
            Ok(preorder_limit(ring, &values, &le, |i, j| {
                let (fi, fc) = &built[i];
                let (ci, cc) = &built[j];
                let lambda = refinements[i][j].as_ref().expect("refinement exists");
                let f = refinement_map(c, (fi, fc), (ci, cc, &covers[j]), lambda, red);
                hs[i].induced(&hs[j], &f.chain_matrix(n, a, fi, ci))
            }))
        }
    }
}
