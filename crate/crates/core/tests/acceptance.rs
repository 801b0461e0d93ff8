//! Acceptance run: one line per criterion, nonzero exit if any fails.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use theta_core::beta_characters::{conductor_check, stabilizer, BetaDatum, Side};
use theta_core::finite_quotient_lab::{
    d1_structure, double_coset_counts, double_coset_expected, heisenberg_virtual_check, r_odd_lemma,
};
use theta_core::theta_lattice::{
    fixed_vectors, heisenberg_model_check, lattice_report, match_random, scalar_character,
};
use theta_core::FieldParams;

const BUDGET: u64 = 50_000_000;
const PREC: u32 = 16;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn field(p: u32) -> FieldParams {
    FieldParams::new(p, PREC).expect("odd prime")
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_0000 + tag)
}

fn all(parts: Vec<(String, bool)>) -> Outcome {
    let text = parts
        .iter()
        .map(|(s, _)| s.as_str())
        .collect::<Vec<_>>()
        .join("; ");
    if parts.iter().all(|(_, ok)| *ok) {
        Ok(text)
    } else {
        Err(text)
    }
}

fn coset_counts() -> Outcome {
    let mut parts = Vec::new();
    for p in [3, 5] {
        let f = field(p);
        let rep = double_coset_counts(&f, 2, BUDGET).map_err(|e| e.to_string())?;
        let q = p as u64;
        // independent closed form next to the literal table for p = 3
        let literal = p != 3 || rep.counts == [3, 9, 3, 18, 9, 5];
        let ok = rep.counts == double_coset_expected(q)
            && literal
            && rep.partitions_ok
            && rep.subgroups_ok;
        parts.push((format!("p={p} counts {:?}", rep.counts), ok));
    }
    all(parts)
}

fn conductors() -> Outcome {
    let f = field(3);
    let mut parts = Vec::new();
    for n in [1, 2] {
        for side in [Side::Sl2, Side::Quat] {
            let d = BetaDatum::standard(f, side, n).map_err(|e| e.to_string())?;
            let rep = conductor_check(&d, BUDGET).map_err(|e| e.to_string())?;
            parts.push((
                format!("{side:?} n={n} domain {}", rep.domain_order),
                rep.holds(),
            ));
        }
    }
    all(parts)
}

fn stabilizers() -> Outcome {
    let f = field(3);
    let mut parts = Vec::new();
    for side in [Side::Sl2, Side::Quat] {
        let d = BetaDatum::standard(f, side, 2).map_err(|e| e.to_string())?;
        let want = 2 - d.r + 1;
        let rep = stabilizer(&d, BUDGET).map_err(|e| e.to_string())?;
        let ok = rep.level == Some(want) && rep.orbit_stabilizer_holds();
        parts.push((
            format!(
                "{side:?} stabilizer {} of {} level {:?}",
                rep.stabilizer_order, rep.group_order, rep.level
            ),
            ok,
        ));
    }
    all(parts)
}

fn d1_quotient() -> Outcome {
    let mut parts = Vec::new();
    for p in [3, 5] {
        let rep = d1_structure(&field(p), BUDGET).map_err(|e| e.to_string())?;
        let ok = rep.holds() && rep.order == p as u64 + 1;
        parts.push((
            format!(
                "p={p} order {} cyclic {}",
                rep.order,
                rep.generator.is_some()
            ),
            ok,
        ));
    }
    all(parts)
}

fn r_odd() -> Outcome {
    let rep = r_odd_lemma(&field(3), 4, 200, BUDGET, &mut rng(5)).map_err(|e| e.to_string())?;
    all(vec![(
        format!(
            "orders {} = {}, {} samples, {} factorization failures",
            rep.lower_order,
            rep.upper_order,
            rep.samples,
            rep.decomposition_failures.len()
        ),
        rep.holds() && rep.samples == 200,
    )])
}

fn virtual_character() -> Outcome {
    let rep = heisenberg_virtual_check(&field(3), 2, BUDGET, 8, &mut rng(6))
        .map_err(|e| e.to_string())?;
    all(vec![(
        format!(
            "degree {:?} norm {:?} restriction {} pairing {:?} frobenius failures {}",
            rep.h_degree.map(|r| r.to_string()),
            rep.h_norm.map(|r| r.to_string()),
            rep.restriction_is_rho0,
            rep.rho_rho0.map(|r| r.to_string()),
            rep.frobenius_failures
        ),
        rep.holds(3),
    )])
}

fn deep_subgroups_fix() -> Outcome {
    let mut parts = Vec::new();
    for p in [3, 5] {
        for side in [Side::Sl2, Side::Quat] {
            let rep =
                fixed_vectors(&field(p), side, 1, 1000, &mut rng(7)).map_err(|e| e.to_string())?;
            parts.push((
                format!(
                    "p={p} {side:?} not fixed {}/{}",
                    rep.not_fixed + rep.outside_h_m,
                    rep.trials
                ),
                rep.holds(),
            ));
        }
    }
    all(parts)
}

fn scalar_characters() -> Outcome {
    let mut parts = Vec::new();
    for p in [3, 5] {
        for k in [1, 2] {
            for side in [Side::Sl2, Side::Quat] {
                let rep = scalar_character(&field(p), side, k, 500, &mut rng(8))
                    .map_err(|e| e.to_string())?;
                parts.push((
                    format!(
                        "p={p} k={k} {side:?} mismatches {}/{}",
                        rep.mismatches, rep.trials
                    ),
                    rep.holds(),
                ));
            }
        }
    }
    all(parts)
}

fn matching() -> Outcome {
    let mut parts = Vec::new();
    for p in [3, 5] {
        let rep = match_random(&field(p), &[0, 1, 2], 1000, &mut rng(9));
        let ok = rep.failures == 0 && rep.det_norm_failures == 0 && rep.closed_form_failures == 0;
        parts.push((
            format!(
                "p={p} {}/{} tuples match",
                rep.trials - rep.failures,
                rep.trials
            ),
            ok,
        ));
    }
    all(parts)
}

fn lattices() -> Outcome {
    let mut parts = Vec::new();
    for p in [3, 5] {
        let rep = lattice_report(&field(p), &[0, 1, 2]).map_err(|e| e.to_string())?;
        parts.push((
            format!("p={p} index exponent {:?}", rep.quotient_exponent),
            rep.holds(),
        ));
    }
    all(parts)
}

fn finite_heisenberg() -> Outcome {
    let rep = heisenberg_model_check(&field(3), BUDGET).map_err(|e| e.to_string())?;
    all(vec![(
        format!(
            "dim {} pairs {} irreducible {}",
            rep.dim, rep.pairs, rep.irreducible
        ),
        rep.holds(3),
    )])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("double coset counts", coset_counts),
        ("conductor of psi_beta", conductors),
        ("stabilizers of psi_beta", stabilizers),
        ("D1/D1_1 cyclic of order q+1", d1_quotient),
        ("E1 D1_(r-1) = E1 D1_r and Cayley factorization", r_odd),
        ("virtual character 2g/q - f", virtual_character),
        ("deep subgroups fix Y_1", deep_subgroups_fix),
        ("lattice-model scalar equals psi_b", scalar_characters),
        ("det b1 = N(b2) and closed form", matching),
        ("lattice duals", lattices),
        ("finite Heisenberg model", finite_heisenberg),
    ];
    let results: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria.iter().map(|(_, f)| s.spawn(f)).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err("panicked".into())))
            .collect()
    });
    let mut failed = 0;
    for (i, ((name, _), r)) in criteria.iter().zip(&results).enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1)
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
