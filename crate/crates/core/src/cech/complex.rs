use serde::Serialize;

use super::CechError;
use crate::kmod::{subquotient, CanonicalForm, Int, Lattice, Matrix, ModuleMap, PresentedModule, Ring};

/// `C_0 ← C_1 ← … ← C_top`; `boundaries[n]: C_{n+1} → C_n`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    ring: Ring,
    modules: Vec<PresentedModule>,
    boundaries: Vec<ModuleMap>,
}

/// `C^0 → C^1 → … → C^top`; `coboundaries[n]: C^n → C^{n+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    ring: Ring,
    modules: Vec<PresentedModule>,
    coboundaries: Vec<ModuleMap>,
}

/// A (co)homology module as `cycles / boundaries` inside the ambient
/// degree, with its generators written in ambient coordinates.
#[derive(Clone, Debug)]
pub struct Homology {
    pub module: PresentedModule,
    cycles: Lattice,
    representatives: Matrix,
}

/// Chain complexes as matrix lists, for export.
#[derive(Clone, Debug, Serialize)]
pub struct ComplexDump {
    pub ring: Ring,
    pub modules: Vec<CanonicalForm>,
    pub generators: Vec<usize>,
    pub differentials: Vec<Vec<Vec<String>>>,
}

impl ChainComplex {
    pub fn new(ring: Ring, modules: Vec<PresentedModule>, boundaries: Vec<ModuleMap>) -> Result<ChainComplex, CechError> {
        let c = ChainComplex::new_unchecked(ring, modules, boundaries);
        c.check()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(ring: Ring, modules: Vec<PresentedModule>, boundaries: Vec<ModuleMap>) -> ChainComplex {
        debug_assert_eq!(boundaries.len() + 1, modules.len().max(1));
        ChainComplex { ring, modules, boundaries }
    }

    /// Verifies shapes, well-definedness and `d ∘ d = 0`.
    pub fn check(&self) -> Result<(), CechError> {
        check_shapes(&self.modules, &self.boundaries, |n| (n + 1, n))?;
        for n in 1..self.boundaries.len() {
            let dd = self.boundaries[n].then(&self.boundaries[n - 1])?;
            if !dd.is_zero() {
                return Err(CechError::NotAComplex { degree: n + 1 });
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Highest degree present.
    pub fn top(&self) -> usize {
        self.modules.len().saturating_sub(1)
    }

    pub fn module(&self, n: usize) -> &PresentedModule {
        &self.modules[n]
    }

    pub fn modules(&self) -> &[PresentedModule] {
        &self.modules
    }

    /// `d: C_{n+1} → C_n`.
    pub fn boundary(&self, n: usize) -> &ModuleMap {
        &self.boundaries[n]
    }

    /// `H_n`, defined for `n < top()` (the incoming boundary must be known).
    pub fn homology(&self, n: usize) -> Result<Homology, CechError> {
        if n >= self.top() {
            return Err(CechError::DegreeOutOfRange { degree: n, top: self.top() });
        }
        let cycles = if n == 0 {
            Lattice::full(self.modules[0].generators(), self.ring.arith())
        } else {
            self.boundaries[n - 1].kernel_lattice()
        };
        Ok(Homology::new(self.ring, cycles, self.boundaries[n].image_lattice()))
    }

    pub fn dump(&self) -> ComplexDump {
        dump(self.ring, &self.modules, &self.boundaries)
    }
}

impl CochainComplex {
    pub fn new(ring: Ring, modules: Vec<PresentedModule>, coboundaries: Vec<ModuleMap>) -> Result<CochainComplex, CechError> {
        let c = CochainComplex::new_unchecked(ring, modules, coboundaries);
        c.check()?;
        Ok(c)
    }

    pub(crate) fn new_unchecked(ring: Ring, modules: Vec<PresentedModule>, coboundaries: Vec<ModuleMap>) -> CochainComplex {
        debug_assert_eq!(coboundaries.len() + 1, modules.len().max(1));
        CochainComplex { ring, modules, coboundaries }
    }

    pub fn check(&self) -> Result<(), CechError> {
        check_shapes(&self.modules, &self.coboundaries, |n| (n, n + 1))?;
        for n in 1..self.coboundaries.len() {
            let dd = self.coboundaries[n - 1].then(&self.coboundaries[n])?;
            if !dd.is_zero() {
                return Err(CechError::NotAComplex { degree: n - 1 });
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn top(&self) -> usize {
        self.modules.len().saturating_sub(1)
    }

    pub fn module(&self, n: usize) -> &PresentedModule {
        &self.modules[n]
    }

    /// `d: C^n → C^{n+1}`.
    pub fn coboundary(&self, n: usize) -> &ModuleMap {
        &self.coboundaries[n]
    }

    /// `H^n`, defined for `n < top()` (the outgoing coboundary must be known).
    pub fn cohomology(&self, n: usize) -> Result<Homology, CechError> {
        if n >= self.top() {
            return Err(CechError::DegreeOutOfRange { degree: n, top: self.top() });
        }
        let cycles = self.coboundaries[n].kernel_lattice();
        let boundaries = if n == 0 {
            self.modules[0].relation_lattice().clone()
        } else {
            self.coboundaries[n - 1].image_lattice()
        };
        Ok(Homology::new(self.ring, cycles, boundaries))
    }

    pub fn dump(&self) -> ComplexDump {
        dump(self.ring, &self.modules, &self.coboundaries)
    }
}

impl Homology {
    pub(crate) fn new(ring: Ring, cycles: Lattice, boundaries: Lattice) -> Homology {
        let (module, representatives) = subquotient(ring, &cycles, &boundaries);
        Homology { module, cycles, representatives }
    }

    /// Generators as cycles in the ambient degree.
    pub fn representatives(&self) -> &Matrix {
        &self.representatives
    }

    /// The class of an ambient cycle, in the generators of `module`.
    pub fn class_of(&self, v: &[Int]) -> Option<Vec<Int>> {
        self.cycles.coords(v)
    }

    /// The map `self → other` induced by an ambient (co)chain map given by
    /// `matrix` (row convention).
    pub fn induced(&self, other: &Homology, matrix: &Matrix) -> ModuleMap {
        let rows = self
            .representatives
            .rows_iter()
            .map(|r| other.class_of(&matrix.apply(r)).expect("chain maps send cycles to cycles"))
            .collect();
        ModuleMap::new_unchecked(self.module.clone(), other.module.clone(), Matrix::from_rows(rows, other.module.generators()))
    }
}

fn check_shapes(modules: &[PresentedModule], maps: &[ModuleMap], ends: impl Fn(usize) -> (usize, usize)) -> Result<(), CechError> {
    if maps.len() + 1 != modules.len().max(1) {
        return Err(CechError::Shape { modules: modules.len(), maps: maps.len() });
    }
    for (n, d) in maps.iter().enumerate() {
        let (s, t) = ends(n);
        if !d.domain().same_presentation(&modules[s]) || !d.codomain().same_presentation(&modules[t]) {
            return Err(CechError::Shape { modules: modules.len(), maps: maps.len() });
        }
        if let Some(relation) = d.ill_defined_relation() {
            return Err(CechError::Module(crate::kmod::ModuleError::IllDefined { relation }));
        }
    }
    Ok(())
}

fn dump(ring: Ring, modules: &[PresentedModule], maps: &[ModuleMap]) -> ComplexDump {
    ComplexDump {
        ring,
        modules: modules.iter().map(|m| m.canonicalize()).collect(),
        generators: modules.iter().map(|m| m.generators()).collect(),
        differentials: maps
            .iter()
            .map(|d| d.matrix().rows_iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect())
            .collect(),
    }
}
