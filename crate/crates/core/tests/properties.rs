//! Randomized structural invariants: p-adic unit arithmetic, abelian group
//! axioms, omega subgroups, power-automorphism containment, and group axioms
//! in cyclic extensions.

use proptest::prelude::*;

use fci_core::abelian::FinAbelian;
use fci_core::dedekind::DedekindGroup;
use fci_core::extension::{CyclicExtension, Top};
use fci_core::padic::{PadicUnit, Valuation};
use fci_core::pauto::PowerAut;

const SMALL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

fn arb_unit() -> impl Strategy<Value = PadicUnit> {
    (0usize..SMALL_PRIMES.len(), 1u32..=6, any::<i64>()).prop_map(|(pi, n, v)| {
        let p = SMALL_PRIMES[pi];
        let m = p.pow(n) as i64;
        let mut v = v.rem_euclid(m);
        if v as u64 % p == 0 {
            v += 1;
        }
        PadicUnit::new(p, n, v).unwrap()
    })
}

// abelian p-groups and general finite abelian groups of modest order
fn arb_fin_abelian() -> impl Strategy<Value = FinAbelian> {
    proptest::collection::vec((0usize..4, 1u32..=3), 1..=3).prop_map(|raw| {
        let comps: Vec<(u64, u32)> = raw
            .into_iter()
            .map(|(pi, e)| (SMALL_PRIMES[pi], if SMALL_PRIMES[pi] > 3 { e.min(2) } else { e }))
            .collect();
        FinAbelian::new(comps).unwrap()
    })
}

fn arb_p_group() -> impl Strategy<Value = (u64, FinAbelian)> {
    (0usize..3, proptest::collection::vec(1u32..=3, 1..=3)).prop_map(|(pi, es)| {
        let p = SMALL_PRIMES[pi];
        let comps: Vec<(u64, u32)> =
            es.into_iter().map(|e| (p, if p > 3 { e.min(2) } else { e })).collect();
        (p, FinAbelian::new(comps).unwrap())
    })
}

fn element_from_seed(a: &FinAbelian, seed: u64) -> fci_core::abelian::AbElement {
    let mut s = seed | 1;
    let coords = a
        .moduli()
        .iter()
        .map(|&m| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) % m
        })
        .collect();
    a.element(coords).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn padic_pow_is_additive(t in arb_unit(), a in -10i64..=10, b in -10i64..=10) {
        let lhs = t.pow(a + b);
        let rhs = t.pow(a).mul(&t.pow(b)).unwrap();
        prop_assert_eq!(lhs.residue(), rhs.residue());
    }

    #[test]
    fn padic_valuation_divides_exactly(t in arb_unit(), k in 1u64..=20) {
        let (p, n) = (t.prime(), t.precision());
        let r = (t.pow(k as i64).residue() + t.modulus() - 1) % t.modulus();
        match t.valuation_pow_minus_one(k) {
            Valuation::Finite(j) => {
                prop_assert!(j < n);
                prop_assert_eq!(r % p.pow(j), 0);
                prop_assert_ne!(r / p.pow(j) % p, 0, "p^(j+1) must not divide t^k - 1");
                if p == 2 {
                    prop_assert!(j >= 1, "every 2-adic unit is 1 mod 2");
                }
            }
            Valuation::PrecisionExhausted => prop_assert_eq!(r, 0),
        }
    }

    #[test]
    fn abelian_group_axioms(a in arb_fin_abelian(), s in any::<[u64; 3]>()) {
        let (x, y, z) = (
            element_from_seed(&a, s[0]),
            element_from_seed(&a, s[1]),
            element_from_seed(&a, s[2]),
        );
        let xy_z = a.add(&a.add(&x, &y).unwrap(), &z).unwrap();
        let x_yz = a.add(&x, &a.add(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        prop_assert_eq!(a.add(&x, &y).unwrap(), a.add(&y, &x).unwrap());
        prop_assert_eq!(a.add(&x, &a.zero()).unwrap(), x.clone());
        prop_assert_eq!(a.add(&x, &a.neg(&x).unwrap()).unwrap(), a.zero());
        // scalar multiples respect element order
        let o = a.order_of(&x).unwrap() as i64;
        prop_assert_eq!(a.scalar_mul(o, &x).unwrap(), a.zero());
    }

    #[test]
    fn omega_is_a_subgroup_with_closed_form_order((p, a) in arb_p_group(), k in 0u32..=3) {
        let omega = a.omega(k, p).unwrap();
        let expected: u64 = a
            .components()
            .iter()
            .map(|&(q, e)| q.pow(k.min(e)))
            .product();
        prop_assert_eq!(omega.order(), expected);
        if a.order() <= 256 {
            let els = omega.elements_in_parent();
            for x in &els {
                prop_assert!(omega.contains(&a.neg(x).unwrap()).unwrap());
                for y in &els {
                    prop_assert!(omega.contains(&a.add(x, y).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn power_automorphism_maps_into_cyclic((p, a) in arb_p_group(), v in any::<i64>(), s in any::<u64>()) {
        let emax = a.components().iter().map(|&(_, e)| e).max().unwrap();
        let m = p.pow(emax) as i64;
        let mut v = v.rem_euclid(m);
        if v as u64 % p == 0 {
            v += 1;
        }
        let t = PadicUnit::new(p, emax, v).unwrap();
        let base = DedekindGroup::abelian_finite(a.clone());
        let phi = PowerAut::exponents([(p, t)].into());
        let x = base.torsion_element(element_from_seed(&a, s).coords).unwrap();
        let y = phi.apply(&base, &x, 1).unwrap();
        // y must be a multiple of x
        let o = a.order_of(&x.tor).unwrap();
        let hit = (0..o).any(|c| base.pow(&x, c as i64).unwrap() == y);
        prop_assert!(hit, "image must lie in the cyclic subgroup");
    }

    #[test]
    fn extension_group_axioms(e in 1u32..=5, seeds in any::<[u64; 3]>(), ks in any::<[i64; 3]>()) {
        // generalized dihedral extension of Z/2^e: inversion action, m = 2
        let a = FinAbelian::new(vec![(2, e)]).unwrap();
        let base = DedekindGroup::abelian_finite(a.clone());
        let minus_one = PadicUnit::new(2, e, -1).unwrap();
        let phi = PowerAut::exponents([(2, minus_one)].into());
        let top = Top::Finite { order: 2, cocycle: base.identity() };
        let g = CyclicExtension::new(base.clone(), top, phi).unwrap();
        let el = |i: usize| {
            let d = base.torsion_element(element_from_seed(&a, seeds[i]).coords).unwrap();
            g.element(ks[i].rem_euclid(2), d).unwrap()
        };
        let (x, y, z) = (el(0), el(1), el(2));
        prop_assert_eq!(g.mul(&g.mul(&x, &y).unwrap(), &z).unwrap(), g.mul(&x, &g.mul(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(g.mul(&x, &g.identity()).unwrap(), x.clone());
        prop_assert_eq!(g.mul(&x, &g.inv(&x).unwrap()).unwrap(), g.identity());
        prop_assert_eq!(g.inv(&g.inv(&x).unwrap()).unwrap(), x.clone());
        // normal form: pow agrees with repeated multiplication
        let mut acc = g.identity();
        for _ in 0..5 {
            acc = g.mul(&acc, &x).unwrap();
        }
        prop_assert_eq!(g.pow(&x, 5).unwrap(), acc);
    }
}
