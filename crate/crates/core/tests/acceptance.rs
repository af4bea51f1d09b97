//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

mod common;

use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use resourceforge::monotones::padded_spectra;
use resourceforge::oracles::{grid_min_deficit, random_bistochastic_reachability, GridSpec};
use resourceforge::protocol::Register;
use resourceforge::random::{random_unitary, rng};
use resourceforge::*;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn random_state(dim: usize, seed: u64) -> DensityMatrix {
    random_density(dim, 1 + (seed as usize) % dim, seed).unwrap()
}

fn relative_entropy_to_mixed_is_negentropy() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in [2, 3, 4, 8] {
        for seed in 0..100 {
            let rho = random_state(d, seed);
            let mixed = DensityMatrix::maximally_mixed(vec![d]);
            worst = worst.max((relative_entropy(&rho, &mixed).unwrap() - negentropy(&rho)).abs());
        }
    }
    outcome(worst <= 1e-9, format!("max |S(rho||I/d) - negentropy| = {worst:.2e} over 400 states"))
}

fn bell_landmarks() -> Outcome {
    let cfg = OptimizerConfig::default();
    let bell = states::bell();
    let values = [
        ("deficit_one_way", deficit_one_way(&bell, &cfg).unwrap().value, 1.0, 1e-3),
        ("discord", discord(&bell, &cfg).unwrap().value, 1.0, 1e-3),
        ("deficit_zero_way", deficit_zero_way(&bell, &cfg).unwrap().value, 1.0, 1e-3),
        ("relent_to_cq", relent_to_cq(&bell, &cfg).unwrap().value, 1.0, 1e-3),
        ("mutual_information", mutual_information(&bell).unwrap(), 2.0, 1e-9),
    ];
    let passed = values.iter().all(|(_, v, target, tol)| (v - target).abs() <= *tol);
    let detail = values.iter().map(|(name, v, _, _)| format!("{name}={v:.9}")).collect::<Vec<_>>().join(" ");
    outcome(passed, detail)
}

fn free_states_vanish() -> Outcome {
    let cfg = OptimizerConfig::default();
    let (mut cq, mut cc): (f64, f64) = (0.0, 0.0);
    for seed in 0..50 {
        let (da, db) = (2 + (seed as usize) % 2, 2 + (seed as usize / 2) % 2);
        let rho = common::random_cq(da, db, seed);
        cq = cq.max(deficit_one_way(&rho, &cfg).unwrap().value);
        cq = cq.max(relent_to_cq(&rho, &cfg).unwrap().value);
        let rho = common::random_cc(2, 2, seed + 1000);
        cc = cc.max(deficit_zero_way(&rho, &cfg).unwrap().value);
        cc = cc.max(discord_zero_way(&rho, &cfg).unwrap().value);
    }
    outcome(cq <= 1e-6 && cc <= 1e-6, format!("max over c-q = {cq:.2e}, max zero-way over c-c = {cc:.2e}"))
}

fn decomposition_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..200 {
        let (da, db) = (2 + (seed as usize) % 3, 2 + (seed as usize / 3) % 2);
        let rho = random_state(da * db, seed).with_dims(vec![da, db]).unwrap();
        let m = ProjectiveMeasurement::from_basis(random_unitary(da, seed + 500)).unwrap();
        let after = measure_local(&rho, &m, 0).unwrap();
        let local = vn_entropy(&partial_trace(&after, &[0]).unwrap()) - vn_entropy(&partial_trace(&rho, &[0]).unwrap());
        let gap = discord_fixed(&rho, &m).unwrap() - deficit_one_way_fixed(&rho, &m).unwrap() + local;
        worst = worst.max(gap.abs());
    }
    outcome(worst <= 1e-10, format!("max residual = {worst:.2e} over 200 pairs"))
}

fn ordering_chain() -> Outcome {
    let cfg = OptimizerConfig::default();
    let (mut slack, mut cross): (f64, f64) = (f64::NEG_INFINITY, 0.0);
    for seed in 0..50 {
        let rho = common::two_qubit(seed);
        let q = discord(&rho, &cfg).unwrap().value;
        let d1 = deficit_one_way(&rho, &cfg).unwrap().value;
        let d0 = deficit_zero_way(&rho, &cfg).unwrap().value;
        let r = relent_to_cq(&rho, &cfg).unwrap().value;
        slack = slack.max(q - d1).max(d1 - d0);
        cross = cross.max((r - d1).abs());
    }
    outcome(
        slack <= 1e-3 && cross <= 1e-6,
        format!("worst ordering violation = {slack:.2e}, max |relent_to_cq - deficit| = {cross:.2e}"),
    )
}

fn optimizer_matches_oracle() -> Outcome {
    let cfg = OptimizerConfig::default();
    let (coarse, fine) = (GridSpec::new(100, 100).unwrap(), GridSpec::new(400, 400).unwrap());
    let (mut above, mut below): (f64, f64) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for seed in 0..25 {
        let rho = common::two_qubit(seed + 300);
        let v = deficit_one_way(&rho, &cfg).unwrap().value;
        above = above.max(v - grid_min_deficit(&rho, &coarse).unwrap().value);
        below = below.max(grid_min_deficit(&rho, &fine).unwrap().value - v);
    }
    outcome(
        above <= 1e-4 && below <= 1e-3,
        format!("max(opt - grid100) = {above:.2e}, max(grid400 - opt) = {below:.2e}"),
    )
}

fn rate_reciprocity() -> Outcome {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (a, b) = (r.random_range(1e-3..10.0), r.random_range(1e-3..10.0));
        let product = conversion_rate(a, b).unwrap().rate * conversion_rate(b, a).unwrap().rate;
        worst = worst.max((product - 1.0).abs());
    }
    let purity = purity_rate(&DensityMatrix::diagonal(&[0.75, 0.25], vec![2]).unwrap()).rate;
    outcome(
        worst <= 1e-9 && (purity - 0.188722).abs() <= 1e-6,
        format!("max |R R' - 1| = {worst:.2e}, purity_rate(diag(3/4,1/4)) = {purity:.9}"),
    )
}

fn thermodynamic_reduction() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let d = 2 + (seed as usize) % 3;
        let mut r = rng(seed + 40);
        let u = random_unitary(d, seed);
        // Nonuniform spectra keep both negentropies away from zero.
        let spec = |r: &mut rand_chacha::ChaCha8Rng| {
            let mut p = resourceforge::random::random_probabilities(d, r);
            p[0] += 1.0;
            p.iter().map(|x| x / 2.0).collect::<Vec<_>>()
        };
        let a = DensityMatrix::diagonal(&spec(&mut r), vec![d]).unwrap().matrix().conjugate_by(&u);
        let b = DensityMatrix::diagonal(&spec(&mut r), vec![d]).unwrap().matrix().conjugate_by(&u);
        let (a, b) = (DensityMatrix::new(a, vec![d]).unwrap(), DensityMatrix::new(b, vec![d]).unwrap());
        let h = Hamiltonian::new(ComplexMatrix::zeros(d, d), r.random_range(0.1..5.0)).unwrap();
        let rate = thermo_rate(&a, &b, &h).unwrap().rate;
        worst = worst.max((rate - negentropy(&a) / negentropy(&b)).abs());
    }
    let h = Hamiltonian::diagonal(&[0.0, 1.0], LN_2).unwrap();
    let example =
        thermo_rate(&DensityMatrix::basis(0, vec![2]).unwrap(), &DensityMatrix::basis(1, vec![2]).unwrap(), &h)
            .unwrap()
            .rate;
    outcome(
        worst <= 1e-9 && (example - 0.369071).abs() <= 1e-6,
        format!("max |rate - negentropy ratio| = {worst:.2e}, worked example = {example:.9}"),
    )
}

/// Σ_k w_k P_k x for a few random permutations P_k.
fn mix_permutations(x: &[f64], r: &mut impl Rng) -> Vec<f64> {
    let n = x.len();
    let weights = resourceforge::random::random_probabilities(3, r);
    let mut out = vec![0.0; n];
    for w in weights {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(r);
        for i in 0..n {
            out[i] += w * x[perm[i]];
        }
    }
    out
}

fn spectrum(v: &[f64]) -> Spectrum {
    Spectrum::new(v.to_vec()).unwrap()
}

fn majorization_suite() -> Outcome {
    let mut r = rng(99);
    let mut preorder_failures = 0;
    for seed in 0..1000 {
        let n = 2 + (seed as usize) % 5;
        let x = common::random_spectrum(n, seed);
        let (y, z) = if seed % 2 == 0 {
            let y = mix_permutations(&x, &mut r);
            let z = mix_permutations(&y, &mut r);
            (y, z)
        } else {
            (common::random_spectrum(n, seed + 10_000), common::random_spectrum(n, seed + 20_000))
        };
        let (sx, sy, sz) = (spectrum(&x), spectrum(&y), spectrum(&z));
        let m = |a: &Spectrum, b: &Spectrum| majorizes(a, b).unwrap();
        let reflexive = m(&sx, &sx) && m(&sy, &sy);
        let transitive = !(m(&sx, &sy) && m(&sy, &sz)) || m(&sx, &sz);
        let constructed = seed % 2 == 1 || (m(&sx, &sy) && m(&sy, &sz));
        let antisymmetric =
            !(m(&sx, &sy) && m(&sy, &sx)) || sx.values().iter().zip(sy.values()).all(|(a, b)| (a - b).abs() <= 1e-9);
        if !(reflexive && transitive && constructed && antisymmetric) {
            preorder_failures += 1;
        }
    }

    let (mut contradictions, mut disagreements, mut reachable) = (0, 0, 0);
    for seed in 0..200u64 {
        let (dr, ds) = (2 + (seed as usize) % 3, 2 + (seed as usize / 3) % 3);
        let rho = random_state(dr, seed + 3000);
        let sigma = if seed % 2 == 0 && dr == ds {
            // A mixture of unitary conjugations of rho is always reachable.
            let mut m = ComplexMatrix::zeros(dr, dr);
            for (k, w) in [0.5, 0.3, 0.2].iter().enumerate() {
                m = &m + &rho.matrix().conjugate_by(&random_unitary(dr, seed * 3 + k as u64)).scale(*w);
            }
            DensityMatrix::new(m, vec![dr]).unwrap()
        } else {
            random_state(ds, seed + 4000)
        };
        let (a, b) = padded_spectra(&rho, &sigma);
        let oracle = random_bistochastic_reachability(a.values(), b.values(), 500, seed).unwrap();
        let fast = single_shot_noisy_transition(&rho, &sigma).unwrap();
        reachable += usize::from(fast);
        contradictions += usize::from(oracle && !fast);
        disagreements += usize::from(oracle != fast);
    }
    outcome(
        preorder_failures == 0 && contradictions == 0,
        format!(
            "preorder failures {preorder_failures}/1000; oracle-reached but rejected {contradictions}/200 \
             ({reachable} accepted, {disagreements} total disagreements)"
        ),
    )
}

fn protocol_closure() -> Outcome {
    let registers = [
        Register::new(DensityMatrix::maximally_mixed(vec![2, 2]), vec![Side::A, Side::B]).unwrap(),
        Register::new(DensityMatrix::maximally_mixed(vec![2, 3, 2]), vec![Side::A, Side::B, Side::B]).unwrap(),
        Register::new(DensityMatrix::maximally_mixed(vec![3, 2]), vec![Side::B, Side::A]).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    let mut applied = 0;
    for (i, reg) in registers.iter().enumerate() {
        let mut steps = vec![
            ProtocolStep::AddMaxMixedAncilla { side: Side::A, dim: 3 },
            ProtocolStep::AddMaxMixedAncilla { side: Side::B, dim: 2 },
            ProtocolStep::LocalPartialTrace { side: Side::A, subsystem: 0 },
            ProtocolStep::LocalPartialTrace { side: Side::B, subsystem: 0 },
        ];
        for side in [Side::A, Side::B] {
            let owned: usize = reg.owned_by(side).iter().map(|&k| reg.state().dims()[k]).product();
            steps.push(ProtocolStep::LocalUnitary { side, matrix: random_unitary(owned, i as u64 * 10 + side as u64) });
            for q in 0..reg.owned_by(side).len() {
                steps.push(ProtocolStep::SendQubit { from: side, qubit: q });
            }
        }
        for step in &steps {
            match apply_step(reg, step, Mode::Nlocc) {
                Ok(out) => {
                    let mixed = DensityMatrix::maximally_mixed(out.state().dims().to_vec());
                    worst = worst.max(out.state().matrix().max_diff(mixed.matrix()));
                    applied += 1;
                }
                // Sending a qutrit is not a legal step; nothing to check.
                Err(Error::NotAQubit { .. }) => {}
                Err(e) => return outcome(false, format!("unexpected error {e}")),
            }
        }
    }
    let script = ProtocolScript::new(
        Mode::Clocc,
        vec![
            ProtocolStep::SendQubit { from: Side::A, qubit: 0 },
            ProtocolStep::LocalUnitary { side: Side::B, matrix: states::cnot() },
            ProtocolStep::LocalPartialTrace { side: Side::B, subsystem: 0 },
        ],
    )
    .unwrap();
    let bound = deficit_bound(&states::bell(), &script, 0.01).unwrap();
    outcome(
        worst <= 1e-12 && bound == 1.0,
        format!("max deviation from I/d over {applied} steps = {worst:.2e}, Bell script bound = {bound}"),
    )
}

fn multicopy_subadditivity() -> Outcome {
    let cfg = OptimizerConfig { restarts: 8, ..Default::default() };
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..10 {
        let rho = common::two_qubit(seed + 800);
        let one = deficit_one_way(&rho, &cfg).unwrap().value;
        let two = multicopy_deficit(&rho, 2, &cfg).unwrap().value;
        worst = worst.max(two - one);
    }
    outcome(worst <= 1e-3, format!("max(per-copy deficit of 2 copies - single copy) = {worst:.2e} (8 restarts)"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        ("relative entropy to I/d equals negentropy", secs(10), relative_entropy_to_mixed_is_negentropy),
        ("Bell-state landmarks", secs(120), bell_landmarks),
        ("quantumness vanishes on free states", secs(300), free_states_vanish),
        ("discord/deficit decomposition identity", secs(60), decomposition_identity),
        ("ordering chain and cross-path agreement", secs(600), ordering_chain),
        ("optimizer agrees with grid oracle", secs(600), optimizer_matches_oracle),
        ("conversion-rate reciprocity", secs(10), rate_reciprocity),
        ("thermodynamic reduction", secs(10), thermodynamic_reduction),
        ("majorization preorder and bistochastic oracle", secs(300), majorization_suite),
        ("protocol closure", secs(60), protocol_closure),
        ("multicopy subadditivity", secs(1800), multicopy_subadditivity),
    ];
    let mut failures = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let passed = result.passed && elapsed <= *budget;
        failures += usize::from(!passed);
        println!(
            "[{}] {:>2} {name}: {} ({:.1}s, budget {}s)",
            if passed { "PASS" } else { "FAIL" },
            k + 1,
            result.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
