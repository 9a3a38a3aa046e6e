//! One function per subcommand. Each turns an [`ExperimentConfig`] into a
//! [`Report`] and never touches the filesystem.

use std::collections::BTreeMap;

use bellframe::entanglement::{
    correlation_experiment, decode_distribution, error_signal, extended_decode, extended_encode,
    hadamard_diagnostic, ket00, purity, rotated_outcome_probabilities, BellFlavor,
    CorrelationSource, DensityMatrix, Message, SourceModel,
};
use bellframe::frames::{frame_membership, nine_directions, six_frames};
use bellframe::gates::{imperfect_entangler, subgroup_check, verify_table, GroupLabel};
use bellframe::linalg::{apply, fidelity, inner, StateVector, ACCUM_TOL, EXACT_TOL};
use bellframe::measure::{derive_seed, rng_from_seed};
use bellframe::qkd::{
    exact_statistics, run_session_with, source_throughput, ChannelModel, EveStrategy,
    ProtocolSetup, ProtocolVariant, SessionConfig,
};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, ExperimentConfig};
use crate::report::{Report, Table};

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Core(#[from] bellframe::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

type Result<T> = std::result::Result<T, CommandError>;

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    if config.trials == 0 {
        return Err(CommandError::Config("trials must be at least 1".into()));
    }
    match config.command {
        Command::GroupTable => cmd_group_table(config),
        Command::Entangler => cmd_entangler(config),
        Command::Bb84 => cmd_bb84(config),
        Command::DenseCode => cmd_dense_code(config),
        Command::Mixedness => cmd_mixedness(config),
        Command::Directions => cmd_directions(config),
        Command::SourceRate => cmd_source_rate(config),
    }
}

fn labels(v: &[GroupLabel]) -> String {
    v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct VerdictRow {
    row: String,
    col: String,
    expected: String,
    computed: String,
    phase: &'static str,
    phase_re: f64,
    phase_im: f64,
    exact: bool,
    agrees: bool,
}

pub fn cmd_group_table(config: &ExperimentConfig) -> Result<Report> {
    use GroupLabel::*;
    let verdicts = verify_table()?;
    let mut table = Table::new(["row", "col", "expected", "computed", "phase", "exact", "agrees"]);
    let mut rows = Vec::with_capacity(64);
    let mut phase_counts: BTreeMap<&str, u64> = BTreeMap::new();
    for v in &verdicts {
        *phase_counts.entry(v.phase_name()).or_default() += 1;
        table.push([
            v.row.to_string(),
            v.col.to_string(),
            v.expected.to_string(),
            v.computed.to_string(),
            v.phase_name().to_string(),
            v.exact.to_string(),
            v.agrees().to_string(),
        ]);
        rows.push(VerdictRow {
            row: v.row.to_string(),
            col: v.col.to_string(),
            expected: v.expected.to_string(),
            computed: v.computed.to_string(),
            phase: v.phase_name(),
            phase_re: v.phase.re,
            phase_im: v.phase.im,
            exact: v.exact,
            agrees: v.agrees(),
        });
    }
    let matching = verdicts.iter().filter(|v| v.agrees()).count();
    let exact = verdicts.iter().filter(|v| v.exact).count();
    let mut subgroups = BTreeMap::new();
    for set in [vec![I], vec![I, A, B, C], vec![I, B], vec![I, D], vec![I, B, D, F]] {
        subgroups.insert(labels(&set), subgroup_check(&set));
    }
    let summary = json!({
        "total": verdicts.len(),
        "matching": matching,
        "exact": exact,
        "projective": verdicts.len() - exact,
        "phase_counts": phase_counts,
        "convention": "row label is the left factor",
        "subgroups": subgroups,
    });
    Ok(Report {
        config: config.clone(),
        results: serde_json::to_value(rows)?,
        summary,
        verified: matching == verdicts.len() && verdicts.len() == 64,
        table,
    })
}

#[derive(Debug, Clone, Serialize)]
struct EntanglerTrial {
    trial: u64,
    theta1: f64,
    theta2: f64,
    fidelity: f64,
    detection: f64,
    analytic_fidelity: f64,
    analytic_detection: f64,
    norm_deviation: f64,
}

/// Composite Simpson estimate of the mean of `sin²(θ/2)` over `[lo, hi]`.
pub fn mean_detection_quadrature(lo: f64, hi: f64) -> f64 {
    let f = |t: f64| (t / 2.0).sin().powi(2);
    if (hi - lo).abs() < f64::EPSILON {
        return f(lo);
    }
    let n = 1000;
    let h = (hi - lo) / n as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + i as f64 * h);
    }
    acc * h / 3.0 / (hi - lo)
}

pub fn cmd_entangler(config: &ExperimentConfig) -> Result<Report> {
    let [lo, hi] = config.theta_range_or_default();
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(CommandError::Config(format!("bad theta range [{lo}, {hi}]")));
    }
    let n = config.grid.unwrap_or(config.trials);
    if n == 0 {
        return Err(CommandError::Config("grid must have at least one point".into()));
    }
    let phi_plus = BellFlavor::Standard.basis().states[0].clone();
    let trial = |i: u64| -> EntanglerTrial {
        let mut rng = rng_from_seed(derive_seed(config.seed, i));
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let grid_point = config.grid.map(|g| {
            if g == 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (g - 1) as f64
            }
        });
        let theta1 = config
            .theta1
            .or(grid_point)
            .unwrap_or(lo + (hi - lo) * u1);
        let theta2 = config.theta2.unwrap_or(if config.grid.is_some() {
            0.0
        } else {
            lo + (hi - lo) * u2
        });
        let s = apply(&imperfect_entangler(theta1, theta2), &ket00()).expect("dimension 4");
        let diag = hadamard_diagnostic(&s).expect("dimension 4");
        EntanglerTrial {
            trial: i,
            theta1,
            theta2,
            fidelity: fidelity(&s, &phi_plus).expect("dimension 4"),
            detection: error_signal(&diag),
            analytic_fidelity: (theta1 / 2.0).cos().powi(2),
            analytic_detection: (theta1 / 2.0).sin().powi(2),
            norm_deviation: (s.norm_sqr() - 1.0).abs(),
        }
    };
    let trials: Vec<EntanglerTrial> = if config.parallel {
        (0..n).into_par_iter().map(trial).collect()
    } else {
        (0..n).map(trial).collect()
    };

    let count = trials.len() as f64;
    let mean = |f: fn(&EntanglerTrial) -> f64| trials.iter().map(f).sum::<f64>() / count;
    let max = |f: fn(&EntanglerTrial) -> f64| trials.iter().map(f).fold(0.0, f64::max);
    let mean_detection = mean(|t| t.detection);
    let var = trials
        .iter()
        .map(|t| (t.detection - mean_detection).powi(2))
        .sum::<f64>()
        / (count - 1.0).max(1.0);
    let expected_mean_detection = if config.theta1.is_some() || config.grid.is_some() {
        mean(|t| t.analytic_detection)
    } else {
        mean_detection_quadrature(lo, hi)
    };
    let fid_dev = max(|t| (t.fidelity - t.analytic_fidelity).abs());
    let det_dev = max(|t| (t.detection - t.analytic_detection).abs());
    let sum_dev = max(|t| (t.fidelity + t.detection - 1.0).abs());
    let norm_dev = max(|t| t.norm_deviation);

    let mut table = Table::new([
        "trial",
        "theta1",
        "theta2",
        "fidelity",
        "detection",
        "analytic_fidelity",
        "analytic_detection",
    ]);
    for t in &trials {
        table.push([
            t.trial.to_string(),
            t.theta1.to_string(),
            t.theta2.to_string(),
            t.fidelity.to_string(),
            t.detection.to_string(),
            t.analytic_fidelity.to_string(),
            t.analytic_detection.to_string(),
        ]);
    }
    let summary = json!({
        "trials": trials.len(),
        "theta_range": [lo, hi],
        "mean_fidelity": mean(|t| t.fidelity),
        "mean_detection": mean_detection,
        "detection_std_error": (var / count).sqrt(),
        "expected_mean_detection": expected_mean_detection,
        "max_fidelity_deviation": fid_dev,
        "max_detection_deviation": det_dev,
        "max_sum_deviation": sum_dev,
        "max_norm_deviation": norm_dev,
    });
    Ok(Report {
        config: config.clone(),
        results: serde_json::to_value(&trials)?,
        summary,
        verified: fid_dev <= ACCUM_TOL
            && det_dev <= ACCUM_TOL
            && sum_dev <= ACCUM_TOL
            && norm_dev <= EXACT_TOL,
        table,
    })
}

pub fn cmd_bb84(config: &ExperimentConfig) -> Result<Report> {
    let variant = config.variant.unwrap_or(ProtocolVariant::StandardZx);
    let setup = ProtocolSetup::new(variant);
    let alice_state = config
        .alice_state
        .as_deref()
        .map(|name| setup.named_state(name))
        .transpose()?;
    let channel = ChannelModel::new(config.flip_prob, config.eve.then_some(EveStrategy::Uniform))?;
    let session = SessionConfig {
        variant,
        n_rounds: config.trials,
        channel,
        seed: config.seed,
        alice_state,
    };
    let t = run_session_with(&session)?;
    let exact = match alice_state {
        None => Some(exact_statistics(variant, channel)?),
        Some(_) => None,
    };
    let noiseless = !config.eve && config.flip_prob == 0.0;

    let mut table;
    if config.log_rounds {
        table = Table::new([
            "round",
            "alice_state",
            "alice_basis",
            "bob_basis",
            "bob_outcome",
            "kept",
            "alice_bit",
            "bob_bit",
            "eve_basis",
            "eve_outcome",
        ]);
        let opt = |v: Option<String>| v.unwrap_or_default();
        for (i, r) in t.rounds.iter().enumerate() {
            table.push([
                i.to_string(),
                setup.state_names[r.alice_state_index].clone(),
                setup.bases[r.alice_basis_index].name.clone(),
                setup.bases[r.bob_basis_index].name.clone(),
                r.bob_outcome.to_string(),
                r.kept.to_string(),
                opt(r.alice_bit.map(|b| b.to_string())),
                opt(r.bob_bit.map(|b| b.to_string())),
                opt(r.eve_basis_index.map(|b| setup.bases[b].name.clone())),
                opt(r.eve_outcome.map(|o| o.to_string())),
            ]);
        }
    } else {
        table = Table::new(["variant", "sent", "sifted", "errors", "qber", "sift_rate"]);
        table.push([
            variant.to_string(),
            t.summary.sent.to_string(),
            t.summary.sifted.to_string(),
            t.summary.errors.to_string(),
            t.summary.qber.map(|q| q.to_string()).unwrap_or_default(),
            t.summary.sift_rate.to_string(),
        ]);
    }

    let results = if config.log_rounds {
        serde_json::to_value(&t.rounds)?
    } else {
        Value::Array(Vec::new())
    };
    let summary = json!({
        "variant": variant,
        "sent": t.summary.sent,
        "sifted": t.summary.sifted,
        "errors": t.summary.errors,
        "qber": t.summary.qber,
        "sift_rate": t.summary.sift_rate,
        "exact_sift_rate": exact.map(|e| e.sift_rate),
        "exact_qber": exact.map(|e| e.qber),
        "states": setup.state_names,
        "bases": setup.bases.iter().map(|b| b.name.clone()).collect::<Vec<_>>(),
    });
    Ok(Report {
        config: config.clone(),
        results,
        summary,
        verified: !noiseless || t.summary.errors == 0,
        table,
    })
}

fn histogram(counts: &[u64; 4]) -> BTreeMap<String, u64> {
    Message::ALL
        .iter()
        .map(|m| (m.to_string(), counts[m.index()]))
        .collect()
}

pub fn cmd_dense_code(config: &ExperimentConfig) -> Result<Report> {
    let flavor = config.flavor.unwrap_or(BellFlavor::Standard);
    let message = config.message.unwrap_or(Message::ALL[0]);
    let other = flavor.other();
    let shots = config.trials;
    let mut rng = rng_from_seed(config.seed);
    let encoded = extended_encode(message, flavor);

    let mut matched = [0u64; 4];
    let mut crossed = [0u64; 4];
    for _ in 0..shots {
        matched[extended_decode(&encoded, flavor, &mut rng)?.index()] += 1;
        crossed[extended_decode(&encoded, other, &mut rng)?.index()] += 1;
    }
    let matched_dist = decode_distribution(&encoded, flavor)?;
    let crossed_dist = decode_distribution(&encoded, other)?;
    let recovery = matched[message.index()] as f64 / shots as f64;

    let mut table = Table::new(["decode_flavor", "outcome", "count", "frequency", "probability"]);
    for (f, counts, dist) in [(flavor, &matched, &matched_dist), (other, &crossed, &crossed_dist)] {
        for m in Message::ALL {
            table.push([
                f.to_string(),
                m.to_string(),
                counts[m.index()].to_string(),
                (counts[m.index()] as f64 / shots as f64).to_string(),
                dist[m.index()].to_string(),
            ]);
        }
    }
    let results = json!({
        "matched": {
            "flavor": flavor,
            "counts": histogram(&matched),
            "probabilities": matched_dist,
        },
        "mismatched": {
            "flavor": other,
            "counts": histogram(&crossed),
            "probabilities": crossed_dist,
        },
    });
    let summary = json!({
        "message": message,
        "flavor": flavor,
        "encoder": flavor.encoders()[message.index()].to_string(),
        "encoded_state": flavor.state_names()[message.index()],
        "shots": shots,
        "recovery_rate": recovery,
        "mismatched_frequencies": crossed.map(|c| c as f64 / shots as f64),
    });
    Ok(Report {
        config: config.clone(),
        results,
        summary,
        verified: matched[message.index()] == shots,
        table,
    })
}

pub fn cmd_mixedness(config: &ExperimentConfig) -> Result<Report> {
    let source = config.source.unwrap_or(CorrelationSource::PureBell);
    let rho = source.density_matrix();
    let valid = DensityMatrix::new(rho.dim(), rho.entries().to_vec()).is_ok();
    let probs = rotated_outcome_probabilities(&rho)?;
    let mut rng = rng_from_seed(config.seed);
    let empirical = correlation_experiment(source, config.trials, &mut rng)?;
    let analytic = probs[0] - probs[1] - probs[2] + probs[3];

    let names = ["++", "+-", "-+", "--"];
    let mut table = Table::new(["outcome", "probability"]);
    for (n, p) in names.iter().zip(probs) {
        table.push([n.to_string(), p.to_string()]);
    }
    let results = json!({
        "density_diagonal": rho.diagonal(),
        "eigenvalues": rho.eigenvalues(),
        "rotated_probabilities": names.iter().zip(probs).map(|(n, p)| (n.to_string(), p)).collect::<BTreeMap<_, _>>(),
    });
    let summary = json!({
        "source": source,
        "purity": purity(&rho),
        "analytic_correlation": analytic,
        "empirical_correlation": empirical,
        "shots": config.trials,
        "seed": config.seed,
    });
    Ok(Report {
        config: config.clone(),
        results,
        summary,
        verified: valid,
        table,
    })
}

fn amplitudes_text(s: &StateVector) -> String {
    s.amplitudes()
        .iter()
        .map(|z| {
            if z.im == 0.0 {
                format!("{}", z.re)
            } else {
                format!("{}{:+}i", z.re, z.im)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_directions(config: &ExperimentConfig) -> Result<Report> {
    let setup = ProtocolSetup::new(ProtocolVariant::QutritNine);
    let frames = six_frames();
    let mut table = Table::new(["index", "direction", "amplitudes", "frames"]);
    let mut dirs = Vec::new();
    let mut ok = true;
    for (i, d) in nine_directions().iter().enumerate() {
        let member: Vec<String> = frame_membership(d)?.iter().map(|l| l.to_string()).collect();
        ok &= !member.is_empty();
        table.push([
            i.to_string(),
            setup.state_names[i].clone(),
            amplitudes_text(d),
            member.join(";"),
        ]);
        dirs.push(json!({
            "index": i,
            "name": setup.state_names[i],
            "amplitudes": d,
            "frames": member,
        }));
    }
    let mut frame_rows = Vec::new();
    for f in &frames {
        let [a, b] = f.vectors();
        ok &= inner(a, b)?.norm() <= EXACT_TOL;
        frame_rows.push(json!({
            "label": f.label.to_string(),
            "plane": f.label.plane,
            "kind": f.label.kind,
            "vectors": [amplitudes_text(a), amplitudes_text(b)],
            "out_of_frame": amplitudes_text(&f.complement()),
        }));
    }
    Ok(Report {
        config: config.clone(),
        results: json!({ "directions": dirs, "frames": frame_rows }),
        summary: json!({ "directions": 9, "frames": frames.len() }),
        verified: ok && frames.len() == 6,
        table,
    })
}

pub fn cmd_source_rate(config: &ExperimentConfig) -> Result<Report> {
    let defaults = SourceModel::default();
    let model = SourceModel::new(
        config.pair_prob.unwrap_or(defaults.pair_prob),
        config.double_pair_prob.unwrap_or(defaults.double_pair_prob),
    )?;
    let mut rng = rng_from_seed(config.seed);
    let t = source_throughput(&model, config.trials, &mut rng)?;
    let z = if t.std_dev > 0.0 {
        (t.post_selected as f64 - t.expected_pairs) / t.std_dev
    } else {
        0.0
    };
    let mut table = Table::new(["trials", "expected_pairs", "std_dev", "post_selected", "double_pairs"]);
    table.push([
        t.trials.to_string(),
        t.expected_pairs.to_string(),
        t.std_dev.to_string(),
        t.post_selected.to_string(),
        t.double_pairs.to_string(),
    ]);
    Ok(Report {
        config: config.clone(),
        results: serde_json::to_value(t)?,
        summary: json!({
            "pair_prob": model.pair_prob,
            "double_pair_prob": model.double_pair_prob,
            "expected_pairs": t.expected_pairs,
            "post_selected": t.post_selected,
            "z_score": z,
        }),
        verified: true,
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_matches_closed_form() {
        let (lo, hi) = (-0.1f64, 0.1f64);
        let closed = 0.5 - (hi.sin() - lo.sin()) / (2.0 * (hi - lo));
        assert!((mean_detection_quadrature(lo, hi) - closed).abs() < 1e-12);
        assert_eq!(mean_detection_quadrature(0.5, 0.5), (0.25f64).sin().powi(2));
    }

    #[test]
    fn zero_trials_rejected() {
        let mut cfg = ExperimentConfig::new(Command::Bb84);
        cfg.trials = 0;
        assert!(matches!(run(&cfg), Err(CommandError::Config(_))));
    }

    #[test]
    fn bad_theta_range_rejected() {
        let mut cfg = ExperimentConfig::new(Command::Entangler);
        cfg.theta_range = Some([1.0, -1.0]);
        assert!(run(&cfg).is_err());
    }

    #[test]
    fn unknown_alice_state_rejected() {
        let mut cfg = ExperimentConfig::new(Command::Bb84);
        cfg.alice_state = Some("+30".into());
        assert!(matches!(run(&cfg), Err(CommandError::Core(_))));
    }
}
