//! Cyclic extensions `G = ⟨g⟩ ⋉ D` of a Dedekind base by a power
//! automorphism, with finite or infinite cyclic top and the cocycle case
//! `g^m = d0`. Elements are kept in the normal form `g^k d`.

use serde::{Deserialize, Serialize};

use crate::abelian::{FgAbelian, FgElement, Order};
use crate::dedekind::{DedekindGroup, DElement};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::pauto::{is_power_auto, PowerAut};

/// Cap up to which constructor-time validation is exhaustive.
const VALIDATION_CAP: u64 = 1 << 13;

/// The top factor of the extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Top {
    Infinite,
    Finite { order: u64, cocycle: DElement },
}

/// `G = ⟨g⟩ ⋉ D`, with `g` acting on `D` via a power automorphism and, for a
/// finite top of order `m`, the presentation relation `g^m = d0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicExtension {
    base: DedekindGroup,
    top: Top,
    action: PowerAut,
}

/// Normal form `g^k d`; `0 <= k < m` when the top is finite.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GElement {
    pub k: i64,
    pub d: DElement,
}

/// `|C_G(x):⟨x⟩|` or the centralizer order, which may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Index {
    Finite(u64),
    Infinite,
}

impl Index {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Index::Finite(n) => Some(*n),
            Index::Infinite => None,
        }
    }
}

/// Description of `C_G(x)`: the finite part `C ∩ D` and, when the projection
/// to the top is non-trivial, a generator `g^{m0} e0` of minimal positive
/// projection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralizerDesc {
    pub torsion_part: Vec<DElement>,
    pub aperiodic_generator: Option<(u64, DElement)>,
}

impl CyclicExtension {
    /// Builds and validates the extension.
    pub fn new(base: DedekindGroup, top: Top, action: PowerAut) -> Result<Self> {
        let ext = CyclicExtension { base, top, action };
        ext.validate()?;
        Ok(ext)
    }

    fn validate(&self) -> Result<()> {
        if let Top::Finite { order, .. } = &self.top {
            if *order < 1 {
                return Err(Error::SpecInvalid("finite top order must be >= 1".into()));
            }
        }
        if self.base.is_finite() {
            let n = self.base.order().expect("finite");
            if n <= VALIDATION_CAP {
                let map = self.action.as_map(&self.base)?;
                if !is_power_auto(&self.base, &map) {
                    return Err(Error::IncompatibleBase);
                }
            }
            if let Top::Finite { order: m, cocycle } = &self.top {
                // g commutes with g^m = d0
                if self.action.apply(&self.base, cocycle, 1)? != *cocycle {
                    return Err(Error::InvalidCocycle("action must fix the cocycle".into()));
                }
                // associativity of the presentation: x^{g^m} = x^{d0}
                if n <= VALIDATION_CAP {
                    for x in self.base.try_elements()? {
                        let lhs = self.action.apply(&self.base, &x, *m as i64)?;
                        let rhs = self.base.mul(
                            &self.base.mul(&self.base.inv(cocycle)?, &x)?,
                            cocycle,
                        )?;
                        if lhs != rhs {
                            return Err(Error::InvalidCocycle(
                                "action^m must equal conjugation by the cocycle".into(),
                            ));
                        }
                    }
                }
            }
        } else {
            // non-periodic abelian base: only +-1 act as power automorphisms
            match &self.action {
                PowerAut::Inversion { invert } => {
                    if let Top::Finite { order: m, cocycle } = &self.top {
                        if *invert && m % 2 != 0 {
                            return Err(Error::InvalidCocycle(
                                "inversion has order 2; finite top order must be even".into(),
                            ));
                        }
                        if self.action.apply(&self.base, cocycle, 1)? != *cocycle {
                            return Err(Error::InvalidCocycle(
                                "cocycle must be fixed by the action (2*d0 = 0)".into(),
                            ));
                        }
                    }
                }
                PowerAut::Exponents { .. } => return Err(Error::IncompatibleBase),
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &DedekindGroup {
        &self.base
    }

    pub fn top(&self) -> &Top {
        &self.top
    }

    pub fn action(&self) -> &PowerAut {
        &self.action
    }

    pub fn top_order(&self) -> Option<u64> {
        match &self.top {
            Top::Infinite => None,
            Top::Finite { order, .. } => Some(*order),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.base.is_finite() && matches!(self.top, Top::Finite { .. })
    }

    pub fn order(&self) -> Option<u64> {
        match (&self.top, self.base.order()) {
            (Top::Finite { order, .. }, Some(n)) => Some(order * n),
            _ => None,
        }
    }

    pub fn identity(&self) -> GElement {
        GElement { k: 0, d: self.base.identity() }
    }

    /// `g^k d` in normal form.
    pub fn element(&self, k: i64, d: DElement) -> Result<GElement> {
        self.normalize(k, d)
    }

    pub fn generator_g(&self) -> GElement {
        GElement { k: 1, d: self.base.identity() }
    }

    fn normalize(&self, k: i64, d: DElement) -> Result<GElement> {
        match &self.top {
            Top::Infinite => Ok(GElement { k, d }),
            Top::Finite { order, cocycle } => {
                let m = *order as i64;
                let q = k.div_euclid(m);
                let r = k.rem_euclid(m);
                // g^{qm + r} X = g^r d0^q X
                let carry = self.base.pow(cocycle, q)?;
                Ok(GElement { k: r, d: self.base.mul(&carry, &d)? })
            }
        }
    }

    pub fn mul(&self, x: &GElement, y: &GElement) -> Result<GElement> {
        // g^{k1} d1 g^{k2} d2 = g^{k1+k2} φ^{k2}(d1) d2
        let moved = self.action.apply(&self.base, &x.d, y.k)?;
        let d = self.base.mul(&moved, &y.d)?;
        self.normalize(x.k + y.k, d)
    }

    pub fn inv(&self, x: &GElement) -> Result<GElement> {
        let d = self.action.apply(&self.base, &self.base.inv(&x.d)?, -x.k)?;
        self.normalize(-x.k, d)
    }

    pub fn pow(&self, x: &GElement, n: i64) -> Result<GElement> {
        let mut acc = self.identity();
        let (times, base) = if n >= 0 { (n, x.clone()) } else { (-n, self.inv(x)?) };
        for _ in 0..times {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    pub fn order_of(&self, x: &GElement) -> Result<Order> {
        match &self.top {
            Top::Infinite if x.k != 0 => Ok(Order::Infinite),
            Top::Infinite => self.base.order_of(&x.d),
            Top::Finite { order: m, .. } => {
                // drive the top coordinate to zero, then use the base order
                let mut acc = x.clone();
                let mut steps = 1u64;
                while acc.k != 0 {
                    acc = self.mul(&acc, x)?;
                    steps += 1;
                    if steps > 2 * m {
                        return Err(Error::Inconsistent("top coordinate fails to cycle".into()));
                    }
                }
                match self.base.order_of(&acc.d)? {
                    Order::Infinite => Ok(Order::Infinite),
                    Order::Finite(t) => Ok(Order::Finite(steps * t)),
                }
            }
        }
    }

    fn commutes(&self, x: &GElement, y: &GElement) -> Result<bool> {
        Ok(self.mul(x, y)? == self.mul(y, x)?)
    }

    /// `C_G(x)` for a materialized (finite) base.
    pub fn centralizer(&self, x: &GElement) -> Result<CentralizerDesc> {
        if !self.base.is_finite() {
            return Err(Error::InfiniteBase);
        }
        let base_els = self.base.try_elements()?;
        let mut torsion_part = Vec::new();
        for e in &base_els {
            let cand = GElement { k: 0, d: e.clone() };
            if self.commutes(&cand, x)? {
                torsion_part.push(e.clone());
            }
        }
        let aperiodic_generator = match &self.top {
            Top::Infinite => {
                let ophi = self.action.order_on(&self.base)?;
                let scan_max = ophi.max(x.k.unsigned_abs()).max(1);
                let mut found: Vec<(u64, DElement)> = Vec::new();
                for m in 1..=scan_max {
                    let sol = base_els.iter().find_map(|e| {
                        let cand = GElement { k: m as i64, d: e.clone() };
                        match self.commutes(&cand, x) {
                            Ok(true) => Some(Ok(e.clone())),
                            Ok(false) => None,
                            Err(err) => Some(Err(err)),
                        }
                    });
                    if let Some(sol) = sol {
                        found.push((m, sol?));
                    }
                }
                let (m0, e0) = found
                    .first()
                    .cloned()
                    .ok_or_else(|| Error::Inconsistent("empty top projection".into()))?;
                // the projection of a subgroup of G onto Z is a subgroup
                for m in 1..=scan_max {
                    let solvable = found.iter().any(|&(f, _)| f == m);
                    if solvable != (m % m0 == 0) {
                        return Err(Error::Inconsistent(
                            "centralizer projection is not a subgroup".into(),
                        ));
                    }
                }
                Some((m0, e0))
            }
            Top::Finite { order: m, .. } => {
                let mut best: Option<(u64, DElement)> = None;
                for km in 1..*m {
                    for e in &base_els {
                        let cand = GElement { k: km as i64, d: e.clone() };
                        if self.commutes(&cand, x)? {
                            best = Some((km, e.clone()));
                            break;
                        }
                    }
                    if best.is_some() {
                        break;
                    }
                }
                best
            }
        };
        Ok(CentralizerDesc { torsion_part, aperiodic_generator })
    }

    /// `|C_G(x):⟨x⟩|`.
    ///
    /// Infinite top with `x = g^k d`, `k != 0`: closed form
    /// `(|k|/m0)·|C_G(x) ∩ D|` from the factorization
    /// `|C:⟨x⟩| = |CD:⟨x⟩D|·|C∩D:⟨x⟩∩D|`. Finite top: enumeration.
    pub fn centralizer_index(&self, x: &GElement) -> Result<Index> {
        if !self.base.is_finite() {
            return Err(Error::InfiniteBase);
        }
        match &self.top {
            Top::Infinite => {
                if x.k == 0 {
                    // C contains g^{m0}Z which meets the finite <x> trivially
                    return Ok(Index::Infinite);
                }
                let desc = self.centralizer(x)?;
                let (m0, _) = desc
                    .aperiodic_generator
                    .clone()
                    .ok_or_else(|| Error::Inconsistent("x must centralize itself".into()))?;
                let k = x.k.unsigned_abs();
                if k % m0 != 0 {
                    return Err(Error::Inconsistent("m0 must divide the exponent of x".into()));
                }
                Ok(Index::Finite((k / m0) * desc.torsion_part.len() as u64))
            }
            Top::Finite { .. } => {
                let desc = self.centralizer(x)?;
                let m0 = desc.aperiodic_generator.as_ref().map(|&(m, _)| m);
                let c_order = match m0 {
                    // cosets of C∩D in C are indexed by the top projection
                    Some(m0) => {
                        let m = self.top_order().expect("finite");
                        (m / m0) * desc.torsion_part.len() as u64
                    }
                    None => desc.torsion_part.len() as u64,
                };
                let x_order = self
                    .order_of(x)?
                    .finite()
                    .ok_or(Error::InfiniteGroup)?;
                Ok(Index::Finite(c_order / x_order))
            }
        }
    }

    /// Whether `y ∈ ⟨x⟩`.
    pub fn in_cyclic(&self, x: &GElement, y: &GElement) -> Result<bool> {
        match self.order_of(x)? {
            Order::Finite(n) => {
                let mut acc = self.identity();
                for _ in 0..n {
                    if acc == *y {
                        return Ok(true);
                    }
                    acc = self.mul(&acc, x)?;
                }
                Ok(false)
            }
            Order::Infinite => {
                if x.k != 0 {
                    if y.k % x.k != 0 {
                        return Ok(false);
                    }
                    return Ok(self.pow(x, y.k / x.k)? == *y);
                }
                // x = d with d of infinite order in a non-periodic base
                if y.k != 0 {
                    return Ok(false);
                }
                let xd = &x.d;
                let n = match xd.free.iter().zip(&y.d.free).find(|&(&a, _)| a != 0) {
                    Some((&a, &b)) => {
                        if b % a != 0 {
                            return Ok(false);
                        }
                        b / a
                    }
                    None => 0,
                };
                Ok(self.pow(x, n)? == *y)
            }
        }
    }

    /// Generators of `G`: `g` together with the base generators.
    pub fn generators(&self) -> Vec<GElement> {
        let mut out = Vec::new();
        let nontrivial_top = !matches!(self.top, Top::Finite { order: 1, .. });
        if nontrivial_top {
            out.push(self.generator_g());
        }
        for b in self.base.generators() {
            out.push(GElement { k: 0, d: b });
        }
        out
    }

    /// Normality of `⟨x⟩`, by conjugating `x` with the generating set.
    pub fn is_cyclic_normal(&self, x: &GElement) -> Result<bool> {
        let mut conjugators = self.generators();
        let inverses: Vec<GElement> =
            conjugators.iter().map(|c| self.inv(c)).collect::<Result<_>>()?;
        conjugators.extend(inverses);
        for c in conjugators {
            let conj = self.mul(&self.mul(&self.inv(&c)?, x)?, &c)?;
            if !self.in_cyclic(x, &conj)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The torsion subgroup. For an infinite top over a periodic base this is
    /// the base `D`; finite instances are entirely torsion.
    pub fn torsion_subgroup(&self) -> Result<Vec<GElement>> {
        if !self.base.is_periodic() {
            return Err(Error::InfiniteGroup);
        }
        match &self.top {
            Top::Infinite => Ok(self
                .base
                .try_elements()?
                .into_iter()
                .map(|d| GElement { k: 0, d })
                .collect()),
            Top::Finite { .. } => Ok(self.elements()),
        }
    }

    pub fn center(&self) -> Result<Vec<GElement>> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        Ok(crate::group::center(self))
    }

    pub fn is_metabelian(&self) -> Result<bool> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        Ok(crate::group::is_metabelian(self, &self.generators()))
    }
}

impl FiniteGroup for CyclicExtension {
    type Elem = GElement;

    fn elements(&self) -> Vec<GElement> {
        let m = self.top_order().expect("finite top required");
        let base_els = self.base.try_elements().expect("finite base required");
        let mut out = Vec::with_capacity((m as usize) * base_els.len());
        for k in 0..m {
            for d in &base_els {
                out.push(GElement { k: k as i64, d: d.clone() });
            }
        }
        out
    }

    fn identity(&self) -> GElement {
        CyclicExtension::identity(self)
    }

    fn op(&self, a: &GElement, b: &GElement) -> GElement {
        self.mul(a, b).expect("elements of this group")
    }

    fn inv(&self, a: &GElement) -> GElement {
        CyclicExtension::inv(self, a).expect("element of this group")
    }
}

/// `G = ⟨g, A⟩` with `A` finitely generated abelian, `g² = d0 ∈ A` and
/// `a^g = a^{-1}`: the shape of non-abelian non-periodic BCI groups.
pub fn fg_abelian_extension(a: FgAbelian, d0: FgElement) -> Result<CyclicExtension> {
    let base = DedekindGroup::Abelian(a);
    let d0atom = DElement {
        q: crate::dedekind::Q8Element::One,
        free: d0.free.clone(),
        tor: d0.tor.clone(),
    };
    let doubled = base.mul(&d0atom, &d0atom)?;
    if doubled != base.identity() {
        return Err(Error::InvalidCocycle("g^2 must satisfy 2*d0 = 0".into()));
    }
    CyclicExtension::new(
        base,
        Top::Finite { order: 2, cocycle: d0atom },
        PowerAut::inversion(),
    )
}

impl CyclicExtension {
    /// All elements with free coordinates in `[-bound, bound]`.
    pub fn window_elements(&self, bound: i64) -> Result<Vec<GElement>> {
        if self.base.is_hamiltonian() {
            return Err(Error::IncompatibleBase);
        }
        let m = self.top_order().ok_or(Error::InfiniteGroup)?;
        let r = self.base.free_rank() as usize;
        let tors = self.base.torsion().elements();
        let mut frees: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..r {
            let mut next = Vec::new();
            for f in &frees {
                for v in -bound..=bound {
                    let mut f = f.clone();
                    f.push(v);
                    next.push(f);
                }
            }
            frees = next;
        }
        let mut out = Vec::new();
        for k in 0..m {
            for f in &frees {
                for t in &tors {
                    out.push(GElement {
                        k: k as i64,
                        d: DElement {
                            q: crate::dedekind::Q8Element::One,
                            free: f.clone(),
                            tor: t.clone(),
                        },
                    });
                }
            }
        }
        Ok(out)
    }

    /// `|C_G(x)|` for `x ∉ A` in an [`fg_abelian_extension`]:
    /// `C_A(x) = {a : 2a = 0}` and the reflection coset contributes a factor
    /// of two.
    pub fn reflection_centralizer_order(&self, x: &GElement) -> Result<u64> {
        if self.base.is_hamiltonian() || !matches!(self.action, PowerAut::Inversion { invert: true }) {
            return Err(Error::IncompatibleBase);
        }
        if x.k % 2 == 0 {
            return Err(Error::Precondition("x must lie outside A".into()));
        }
        // the free part contributes nothing to {a : 2a = 0}
        let two_torsion = self
            .base
            .torsion()
            .components()
            .iter()
            .filter(|&&(p, _)| p == 2)
            .count() as u32;
        Ok(2 * (1u64 << two_torsion))
    }

    /// `|C_G(x):⟨x⟩|` for `x = (0, v) ∈ A` of infinite order in an
    /// [`fg_abelian_extension`]. For `v` with `2v ≠ 0` the centralizer is `A`
    /// itself; the index is finite exactly when the free rank is one.
    pub fn base_centralizer_index(&self, x: &GElement) -> Result<Index> {
        if !matches!(self.action, PowerAut::Inversion { invert: true }) {
            return Err(Error::IncompatibleBase);
        }
        if x.k != 0 {
            return Err(Error::Precondition("x must lie in A".into()));
        }
        if self.base.order_of(&x.d)? != Order::Infinite {
            return Err(Error::Precondition("x must have infinite order".into()));
        }
        let doubled = self.base.mul(&x.d, &x.d)?;
        if doubled == self.base.identity() {
            return Ok(Index::Infinite); // C = G, infinite over a finite <x>
        }
        if self.base.free_rank() != 1 {
            return Ok(Index::Infinite);
        }
        // |A : <v>| = |v_free| * |T| for A = Z + T
        let n = x.d.free[0].unsigned_abs();
        Ok(Index::Finite(n * self.base.torsion().order()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FinAbelian;
    use crate::group::testutil;
    use crate::padic::PadicUnit;

    fn dihedral(n_comps: Vec<(u64, u32)>) -> CyclicExtension {
        let base = DedekindGroup::abelian_finite(FinAbelian::new(n_comps.clone()).unwrap());
        let units = n_comps
            .iter()
            .map(|&(p, e)| (p, PadicUnit::new(p, e, -1).unwrap()))
            .collect();
        CyclicExtension::new(
            base.clone(),
            Top::Finite { order: 2, cocycle: base.identity() },
            PowerAut::exponents(units),
        )
        .unwrap()
    }

    fn z_ltimes(comps: Vec<(u64, u32)>, units: Vec<(u64, u32, i64)>) -> CyclicExtension {
        let base = DedekindGroup::abelian_finite(FinAbelian::new(comps).unwrap());
        let units = units
            .into_iter()
            .map(|(p, n, t)| (p, PadicUnit::new(p, n, t).unwrap()))
            .collect();
        CyclicExtension::new(base, Top::Infinite, PowerAut::exponents(units)).unwrap()
    }

    #[test]
    fn semidirect_law() {
        // infinite dihedral over Z/5: (1,2)*(1,3) = (2,1)
        let g = z_ltimes(vec![(5, 1)], vec![(5, 1, -1)]);
        let x = g.element(1, g.base().torsion_element(vec![2]).unwrap()).unwrap();
        let y = g.element(1, g.base().torsion_element(vec![3]).unwrap()).unwrap();
        let xy = g.mul(&x, &y).unwrap();
        assert_eq!(xy.k, 2);
        assert_eq!(xy.d.tor.coords, vec![1]);
    }

    #[test]
    fn d8_has_order_2_reflections() {
        let d8 = dihedral(vec![(2, 2)]);
        let r = d8.element(1, d8.base().torsion_element(vec![1]).unwrap()).unwrap();
        let sq = d8.mul(&r, &r).unwrap();
        assert_eq!(sq, d8.identity());
        assert_eq!(d8.order_of(&r).unwrap(), Order::Finite(2));
        assert_eq!(d8.mul(&r, &d8.identity()).unwrap(), r);
    }

    #[test]
    fn finite_instances_satisfy_group_axioms() {
        testutil::check_group_axioms(&dihedral(vec![(2, 2)]));
        testutil::check_group_axioms(&dihedral(vec![(2, 1), (3, 1)]));
        // non-split: Q16-like cocycle g^2 = generator of Z/4 twisted by inversion
        let base = DedekindGroup::abelian_finite(FinAbelian::new(vec![(2, 2)]).unwrap());
        let q16ish = CyclicExtension::new(
            base.clone(),
            Top::Finite { order: 2, cocycle: base.torsion_element(vec![2]).unwrap() },
            PowerAut::exponents([(2, PadicUnit::new(2, 2, -1).unwrap())].into()),
        )
        .unwrap();
        testutil::check_group_axioms(&q16ish);
    }

    #[test]
    fn normal_form_round_trip() {
        let d8 = dihedral(vec![(2, 2)]);
        for x in d8.elements() {
            assert_eq!(d8.mul(&x, &d8.inv(&x).unwrap()).unwrap(), d8.identity());
            assert_eq!(d8.mul(&d8.inv(&x).unwrap(), &x).unwrap(), d8.identity());
        }
        let g = z_ltimes(vec![(3, 2)], vec![(3, 4, 4)]);
        for k in -4..4i64 {
            for c in 0..9u64 {
                let x = g.element(k, g.base().torsion_element(vec![c]).unwrap()).unwrap();
                assert_eq!(g.mul(&x, &g.inv(&x).unwrap()).unwrap(), g.identity());
            }
        }
    }

    #[test]
    fn centralizer_of_g_in_d8() {
        let d8 = dihedral(vec![(2, 2)]);
        let g = d8.generator_g();
        let desc = d8.centralizer(&g).unwrap();
        // C = {1, a^2, g, g a^2}
        assert_eq!(desc.torsion_part.len(), 2);
        let brute = crate::group::centralizer_brute(&d8, &g);
        assert_eq!(brute.len(), 4);
        assert_eq!(d8.centralizer_index(&g).unwrap(), Index::Finite(2));
    }

    #[test]
    fn centralizer_infinite_top() {
        // Z ⋉ Z/9 with t = 4: C(g) has torsion part Ω_1 and m0 = 1
        let g = z_ltimes(vec![(3, 2)], vec![(3, 4, 4)]);
        let x = g.generator_g();
        let desc = g.centralizer(&x).unwrap();
        assert_eq!(desc.torsion_part.len(), 3);
        assert_eq!(desc.aperiodic_generator.as_ref().unwrap().0, 1);
        assert_eq!(g.centralizer_index(&x).unwrap(), Index::Finite(3));

        // x = g^2: v_3(16-1) = 1, index = 2*3 = 6
        let x2 = g.pow(&x, 2).unwrap();
        assert_eq!(g.centralizer_index(&x2).unwrap(), Index::Finite(6));

        // t = 1 (degenerate): C = G, index = |D| = 9
        let gid = z_ltimes(vec![(3, 2)], vec![(3, 4, 1)]);
        let x = gid.generator_g();
        assert_eq!(gid.centralizer_index(&x).unwrap(), Index::Finite(9));
    }

    #[test]
    fn centralizer_index_matches_coset_oracle() {
        // oracle: enumerate centralizer elements in a window of top exponents
        // and count cosets of <x>
        let cases = vec![
            (z_ltimes(vec![(3, 2)], vec![(3, 4, 4)]), 1i64),
            (z_ltimes(vec![(3, 2)], vec![(3, 4, 4)]), 2),
            (z_ltimes(vec![(3, 2)], vec![(3, 4, 4)]), 3),
            (z_ltimes(vec![(2, 3)], vec![(2, 5, 3)]), 1),
            (z_ltimes(vec![(2, 3), (5, 1)], vec![(2, 5, 3), (5, 3, -1)]), 2),
        ];
        for (g, k) in cases {
            let x = g.pow(&g.generator_g(), k).unwrap();
            let closed = g.centralizer_index(&x).unwrap().finite().unwrap();
            let ophi = g.action().order_on(g.base()).unwrap() as i64;
            let window = 4 * k.abs() * ophi;
            let mut cosets: std::collections::HashSet<Vec<GElement>> = Default::default();
            for m in -window..=window {
                for d in g.base().try_elements().unwrap() {
                    let y = GElement { k: m, d };
                    if g.mul(&x, &y).unwrap() != g.mul(&y, &x).unwrap() {
                        continue;
                    }
                    // canonical coset label: powers of x normalize the top
                    // exponent of y into [0, |k|)
                    let shift = -y.k.div_euclid(k.abs());
                    let rep = g.mul(&g.pow(&x, shift * k.signum()).unwrap(), &y).unwrap();
                    cosets.insert(vec![rep]);
                }
            }
            assert_eq!(cosets.len() as u64, closed, "k={k}");
        }
    }

    #[test]
    fn normality_examples() {
        let d8 = dihedral(vec![(2, 2)]);
        let a = d8.element(0, d8.base().torsion_element(vec![1]).unwrap()).unwrap();
        assert!(d8.is_cyclic_normal(&a).unwrap());
        assert!(!d8.is_cyclic_normal(&d8.generator_g()).unwrap());
        // brute force agreement
        for x in d8.elements() {
            assert_eq!(
                d8.is_cyclic_normal(&x).unwrap(),
                crate::group::is_cyclic_normal_brute(&d8, &x)
            );
        }
    }

    #[test]
    fn torsion_and_metabelian() {
        let g = z_ltimes(vec![(3, 2)], vec![(3, 4, 4)]);
        let t = g.torsion_subgroup().unwrap();
        assert_eq!(t.len(), 9);
        assert!(t.iter().all(|x| x.k == 0));
        // torsion elements are exactly the finite-order ones in a window
        for k in -3..=3i64 {
            for d in g.base().try_elements().unwrap() {
                let x = GElement { k, d };
                let finite = matches!(g.order_of(&x).unwrap(), Order::Finite(_));
                assert_eq!(finite, t.contains(&x));
            }
        }
        let d8 = dihedral(vec![(2, 2)]);
        assert!(d8.is_metabelian().unwrap());
    }

    #[test]
    fn thm32_shape_inverts_base() {
        let base = DedekindGroup::abelian_finite(FinAbelian::new(vec![(2, 3)]).unwrap());
        let g = CyclicExtension::new(
            base.clone(),
            Top::Finite { order: 2, cocycle: base.identity() },
            PowerAut::exponents([(2, PadicUnit::new(2, 3, -1).unwrap())].into()),
        )
        .unwrap();
        let gg = g.generator_g();
        for d in base.try_elements().unwrap() {
            let a = GElement { k: 0, d: d.clone() };
            let conj = g.mul(&g.mul(&g.inv(&gg).unwrap(), &a).unwrap(), &gg).unwrap();
            assert_eq!(conj.d, base.inv(&d).unwrap());
        }
    }

    #[test]
    fn fg_extension_bounds() {
        // A = Z^2 + Z/4: reflections centralize exactly 2^{r+1} = 4 elements
        let a = FgAbelian { free_rank: 2, torsion: FinAbelian::new(vec![(2, 2)]).unwrap() };
        let g = fg_abelian_extension(a.clone(), a.zero()).unwrap();
        let x = g.generator_g();
        assert_eq!(g.reflection_centralizer_order(&x).unwrap(), 4);

        // infinite dihedral: |C(g)| = 2, |C(a^n):<a^n>| = n
        let zline = FgAbelian { free_rank: 1, torsion: FinAbelian::trivial() };
        let d_inf = fg_abelian_extension(zline.clone(), zline.zero()).unwrap();
        assert_eq!(d_inf.reflection_centralizer_order(&d_inf.generator_g()).unwrap(), 2);
        for n in 1..6i64 {
            let an = GElement {
                k: 0,
                d: DElement {
                    q: crate::dedekind::Q8Element::One,
                    free: vec![n],
                    tor: d_inf.base().torsion().zero(),
                },
            };
            assert_eq!(d_inf.base_centralizer_index(&an).unwrap(), Index::Finite(n as u64));
        }
    }

    #[test]
    fn invalid_cocycle_rejected() {
        let a = FgAbelian { free_rank: 1, torsion: FinAbelian::new(vec![(2, 2)]).unwrap() };
        let mut d0 = a.zero();
        d0.tor.coords[0] = 1; // order 4, not fixed by inversion
        assert!(matches!(
            fg_abelian_extension(a, d0),
            Err(Error::InvalidCocycle(_))
        ));
    }

    #[test]
    fn degenerate_trivial_top_collapses_to_base() {
        let base = DedekindGroup::abelian_finite(FinAbelian::new(vec![(3, 1)]).unwrap());
        let g = CyclicExtension::new(
            base.clone(),
            Top::Finite { order: 1, cocycle: base.identity() },
            PowerAut::identity_periodic(),
        )
        .unwrap();
        assert_eq!(g.order(), Some(3));
        testutil::check_group_axioms(&g);
    }
}
