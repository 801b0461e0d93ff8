//! The registered verification suites.

use crate::config::RunConfig;
use crate::report::Check;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use theta_core::beta_characters::{conductor_check, duality_check, stabilizer, BetaDatum, Side};
use theta_core::finite_quotient_lab::{
    d1_structure, double_coset_counts, double_coset_expected, heisenberg_virtual_check, r_odd_lemma,
};
use theta_core::theta_lattice::{
    fixed_vectors, heisenberg_model_check, lattice_report, match_random, scalar_character,
};
use theta_core::{Error, FieldParams};

pub struct Ctx<'a> {
    pub cfg: &'a RunConfig,
    pub f: FieldParams,
    pub rng: ChaCha8Rng,
}

impl Ctx<'_> {
    fn ns(&self, default: &[u32]) -> Vec<u32> {
        self.cfg
            .n_values
            .clone()
            .unwrap_or_else(|| default.to_vec())
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

/// Runs a fallible computation; a budget overrun becomes a skip, any other error a failure.
fn guarded<T>(
    name: String,
    anchor: &str,
    expected: Value,
    r: theta_core::Result<T>,
    judge: impl FnOnce(T) -> (bool, Value),
) -> Check {
    match r {
        Ok(v) => {
            let (ok, actual) = judge(v);
            Check::new(name, anchor, ok, expected, actual)
        }
        Err(e @ Error::BudgetExceeded { .. }) => {
            Check::skipped(name, anchor, expected, e.to_string())
        }
        Err(e) => Check::new(
            name,
            anchor,
            false,
            expected,
            json!({ "error": e.to_string() }),
        ),
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Sl2 => "sl2",
        Side::Quat => "quat",
    }
}

pub fn characters(ctx: &mut Ctx) -> (Value, Vec<Check>) {
    let ns = ctx.ns(&[1, 2]);
    let mut checks = Vec::new();
    for &n in &ns {
        for side in [Side::Sl2, Side::Quat] {
            let expected = json!({ "homomorphism_failures": 0, "trivial_on_level_n1": true, "nontrivial_on_level_n": true });
            let r = BetaDatum::standard(ctx.f, side, n)
                .and_then(|d| conductor_check(&d, ctx.cfg.budget));
            checks.push(guarded(
                format!("conductor/{}/n={n}", side_name(side)),
                "conductor of psi_beta",
                expected,
                r,
                |rep| (rep.holds(), to_value(&rep)),
            ));
        }
        let r = BetaDatum::standard(ctx.f, Side::Sl2, n)
            .and_then(|d| duality_check(&ctx.f, n, d.r, ctx.cfg.budget));
        checks.push(guarded(
            format!("duality/n={n}"),
            "beta to psi_beta duality",
            json!("lie_side = group_side = distinct"),
            r,
            |rep| (rep.holds(), to_value(&rep)),
        ));
    }
    (json!({ "p": ctx.f.p, "z": ctx.f.z, "n": ns }), checks)
}

pub fn stabilizers(ctx: &mut Ctx) -> (Value, Vec<Check>) {
    let ns = ctx.ns(&[2]);
    let mut checks = Vec::new();
    for &n in &ns {
        for side in [Side::Sl2, Side::Quat] {
            let d = BetaDatum::standard(ctx.f, side, n);
            let want = d.as_ref().map(|d| n - d.r + 1).unwrap_or(0);
            let r = d.and_then(|d| stabilizer(&d, ctx.cfg.budget));
            checks.push(guarded(
                format!("stabilizer/{}/n={n}", side_name(side)),
                "stabilizer of psi_beta",
                json!({ "level": want, "orbit_stabilizer": true }),
                r,
                |rep| {
                    (
                        rep.level == Some(want) && rep.orbit_stabilizer_holds(),
                        to_value(&rep),
                    )
                },
            ));
        }
    }
    (json!({ "p": ctx.f.p, "z": ctx.f.z, "n": ns }), checks)
}

pub fn cosets(ctx: &mut Ctx) -> (Value, Vec<Check>) {
    let ns = ctx.ns(&[2]);
    let q = ctx.f.q();
    let mut checks = Vec::new();
    for &n in &ns {
        let expected = double_coset_expected(q);
        let r = double_coset_counts(&ctx.f, n, ctx.cfg.budget);
        checks.push(guarded(format!("double-coset-counts/n={n}"), "double coset counts", json!(expected), r, |rep| {
            (rep.holds(), json!({ "counts": rep.counts, "orders": rep.orders, "partitions_ok": rep.partitions_ok, "subgroups_ok": rep.subgroups_ok }))
        }));
    }
    (json!({ "p": ctx.f.p, "z": ctx.f.z, "n": ns }), checks)
}

pub fn d1_structure_suite(ctx: &mut Ctx) -> (Value, Vec<Check>) {
    let q = ctx.f.q();
    let r = d1_structure(&ctx.f, ctx.cfg.budget);
    let check = guarded(
        "d1-quotient".into(),
        "D1/D1_1 is cyclic of order q+1",
        json!({ "order": q + 1, "cyclic": true }),
        r,
        |rep| (rep.holds(), to_value(&rep)),
    );
    (json!({ "p": ctx.f.p, "z": ctx.f.z }), vec![check])
}

pub fn r_odd(ctx: &mut Ctx) -> (Value, Vec<Check>) {
    let ns = ctx.ns(&[4]);
    let anchor = "E1 D1_(r-1) = E1 D1_r modulo D1_(n+1)";
    let mut checks = Vec::new();
    for &n in &ns {
        match r_odd_lemma(&ctx.f, n, ctx.cfg.trials, ctx.cfg.budget, &mut ctx.rng) {
            Ok(rep) => {
                checks.push(Check::new(
                    format!("coset-equality/n={n}"),
                    anchor,
                    rep.equal && rep.contains,
                    json!({ "equal": true, "contains": true }),
                    json!({ "equal": rep.equal, "contains": rep.contains, "lower_order": rep.lower_order, "upper_order": rep.upper_order }),
                ));
                checks.push(Check::new(
                    format!("cayley-decomposition/n={n}"),
                    "three-factor Cayley decomposition",
                    rep.decomposition_failures.is_empty(),
                    json!({ "samples": rep.samples, "failures": 0 }),
                    json!({ "samples": rep.samples, "failures": rep.decomposition_failures.len(), "first": rep.decomposition_failures.first() }),
                ));
            }
            Err(e) => checks.push(guarded::<()>(
                format!("r-odd/n={n}"),
                anchor,
                json!(true),
                Err(e),
                |_| (false, Value::Null),
            )),
        }
    }
    (
        json!({ "p": ctx.f.p, "z": ctx.f.z, "n": ns, "samples": ctx.cfg.trials }),
        checks,
    )
}

fn show<T: ToString>(x: &Option<T>) -> Option<String> {
    x.as_ref().map(T::to_string)
}

pub fn virtual_character(ctx: &mut Ctx) -> (Value, Vec<Check>) {
    let ns = ctx.ns(&[2]);
    let q = ctx.f.q().to_string();
    let pairs = ctx.cfg.trials.min(8);
    let anchor = "virtual character 2g/q - f";
    let mut checks = Vec::new();
    for &n in &ns {
        match heisenberg_virtual_check(&ctx.f, n, ctx.cfg.budget, pairs, &mut ctx.rng) {
            Ok(rep) => {
                let (qs, one) = (Some(q.clone()), Some("1".to_string()));
                let items = [
                    (
                        "degree",
                        json!(q),
                        json!(show(&rep.h_degree)),
                        rep.h_integral && show(&rep.h_degree) == qs,
                    ),
                    (
                        "self-inner-product",
                        json!("1"),
                        json!(show(&rep.h_norm)),
                        show(&rep.h_norm) == one,
                    ),
                    (
                        "restriction-is-rho0",
                        json!(true),
                        json!(rep.restriction_is_rho0),
                        rep.restriction_is_rho0,
                    ),
                    (
                        "rho0-irreducible-degree-q",
                        json!([q, "1"]),
                        json!([show(&rep.rho0_degree), show(&rep.rho0_norm)]),
                        show(&rep.rho0_degree) == qs && show(&rep.rho0_norm) == one,
                    ),
                    (
                        "rho-rho0-pairing",
                        json!(q),
                        json!(show(&rep.rho_rho0)),
                        show(&rep.rho_rho0) == qs,
                    ),
                    (
                        "frobenius-reciprocity",
                        json!({ "pairs": pairs, "failures": 0 }),
                        json!({ "pairs": rep.frobenius_pairs, "failures": rep.frobenius_failures }),
                        rep.frobenius_failures == 0,
                    ),
                ];
                for (name, e, a, ok) in items {
                    checks.push(Check::new(format!("{name}/n={n}"), anchor, ok, e, a));
                }
            }
            Err(e) => checks.push(guarded::<()>(
                format!("virtual-character/n={n}"),
                anchor,
                json!(true),
                Err(e),
                |_| (false, Value::Null),
            )),
        }
    }
    (
        json!({ "p": ctx.f.p, "z": ctx.f.z, "n": ns, "frobenius_pairs": pairs }),
        checks,
    )
}

pub fn lattice(ctx: &mut Ctx) -> (Value, Vec<Check>) {
    let ks = ctx.cfg.k_values.clone();
    let mut checks = Vec::new();
    let mut mk: Vec<i32> = vec![0];
    mk.extend(ks.iter().copied().filter(|&k| k != 0));
    match lattice_report(&ctx.f, &mk) {
        Ok(rep) => {
            checks.push(Check::new(
                "a-dual",
                "dual of the good lattice",
                rep.a_dual_is_expected && rep.a_dual_is_tensor,
                json!("Gamma (x) (O_E + P_E^-1 delta)"),
                json!({ "diagonal": rep.a_dual_is_expected, "tensor": rep.a_dual_is_tensor }),
            ));
            checks.push(Check::new("sandwich", "good lattice", rep.sandwich && rep.strict && rep.quotient_exponent == Some(4),
                json!({ "pi_A_dual_in_A": true, "A_strictly_in_A_dual": true, "index": "q^4" }),
                json!({ "sandwich": rep.sandwich, "strict": rep.strict, "index_exponent": rep.quotient_exponent })));
            for (k, ok) in &rep.mk_duals {
                checks.push(Check::new(
                    format!("m{k}-dual"),
                    "(M^k)* = P^-k A*",
                    *ok,
                    json!(true),
                    json!(ok),
                ));
            }
            checks.push(Check::new(
                "double-dual",
                "(L*)* = L",
                rep.double_duals,
                json!(true),
                json!(rep.double_duals),
            ));
        }
        Err(e) => checks.push(guarded::<()>(
            "lattice".into(),
            "dual of the good lattice",
            json!(true),
            Err(e),
            |_| (false, Value::Null),
        )),
    }
    let q = ctx.f.q();
    let r = heisenberg_model_check(&ctx.f, ctx.cfg.budget);
    checks.push(guarded(
        "finite-heisenberg".into(),
        "finite Heisenberg representation",
        json!({ "dim": q * q, "commutation_failures": 0, "central_failures": 0 }),
        r,
        |rep| (rep.holds(q), to_value(&rep)),
    ));
    let trials = ctx.cfg.trials;
    for &k in &ks {
        for side in [Side::Sl2, Side::Quat] {
            let r = fixed_vectors(&ctx.f, side, k, trials, &mut ctx.rng);
            checks.push(guarded(
                format!("fixes-y{k}/{}", side_name(side)),
                "H_M deep subgroups fix Y_k",
                json!({ "trials": trials, "not_fixed": 0 }),
                r,
                |rep| (rep.holds(), to_value(&rep)),
            ));
        }
        for side in [Side::Sl2, Side::Quat] {
            let r = scalar_character(&ctx.f, side, k, trials, &mut ctx.rng);
            checks.push(guarded(
                format!("scalar-is-psi-b/k={k}/{}", side_name(side)),
                "lattice-model scalar equals psi_b",
                json!({ "trials": trials, "mismatches": 0 }),
                r,
                |rep| (rep.holds(), to_value(&rep)),
            ));
        }
    }
    (
        json!({ "p": ctx.f.p, "z": ctx.f.z, "k": ks, "trials": trials, "precision": ctx.f.prec }),
        checks,
    )
}

pub fn theta_match(ctx: &mut Ctx) -> (Value, Vec<Check>) {
    let ks = ctx.cfg.k_values.clone();
    let trials = ctx.cfg.trials;
    let rep = match_random(&ctx.f, &ks, trials, &mut ctx.rng);
    let frac = |fails: usize| format!("{}/{}", trials - fails, trials);
    let checks = vec![
        Check::new(
            "det-b1-equals-norm-b2",
            "N(b2) = det b1",
            rep.det_norm_failures == 0,
            json!(frac(0)),
            json!(frac(rep.det_norm_failures)),
        ),
        Check::new(
            "charpolys-and-traces",
            "matching conjugacy classes",
            rep.failures == 0,
            json!(frac(0)),
            json!(frac(rep.failures)),
        ),
        Check::new(
            "closed-form",
            "closed form of det b1",
            rep.closed_form_failures == 0,
            json!(frac(0)),
            json!(frac(rep.closed_form_failures)),
        ),
    ];
    (
        json!({ "p": ctx.f.p, "z": ctx.f.z, "k": ks, "trials": trials }),
        checks,
    )
}

pub fn run_suite(name: &str, ctx: &mut Ctx) -> (Value, Vec<Check>) {
    match name {
        "characters" => characters(ctx),
        "stabilizers" => stabilizers(ctx),
        "cosets" => cosets(ctx),
        "d1-structure" => d1_structure_suite(ctx),
        "r-odd-lemma" => r_odd(ctx),
        "heisenberg-prop3" => virtual_character(ctx),
        "lattice" => lattice(ctx),
        "theta-match" => theta_match(ctx),
        other => unreachable!("unregistered suite {other}"),
    }
}
