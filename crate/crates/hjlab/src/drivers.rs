//! Suite drivers. Each CLI subcommand maps to one function here that runs
//! the requested checks and assembles a `SuiteReport`. Long sweeps persist
//! progress to a JSON checkpoint file so an interrupted run can resume.

use crate::format::{load_coloring, save_coloring};
use crate::report::{
    interval_json, rational_str, CheckRecord, ConfigEcho, SuiteReport, Timer, PARTIAL,
};
use crate::values;
use anyhow::{bail, Context, Result};
use hj_core::bound::{
    certify, epsilon, limit_margin, minimal_n_for_kappa, optimize_kappa, r_series, Verdict,
};
use hj_core::chain::{all_permutations, chain_ranks, hypercube_q, lemma1_rhs, q_k_sigma};
use hj_core::density::{line_census, p4_from_identity, type_weight, typed_census};
use hj_core::embedding::{
    embedding_count, gadget_length_mix, line_multiplicity, line_multiplicity_oracle,
    min_multiplicity, weighted_odd_count_identity,
};
use hj_core::gadget::{exhaustive_gadget_search, gadget_support, incidence_check, GadgetSweep};
use hj_core::grid::{
    enumerate_lines, line_count, make_checkerboard, make_random, point_rank, rand_below,
    scan_line_ranks, Cell, Coloring, GridPoint, LinePattern,
};
use hj_core::interval::IntervalCtx;
use hj_core::lower::{
    has_mono_ap, hj32_witness, lift_to_grid, search_ap_free, verify_line_free,
    verify_line_free_masked, APConstraint, IntervalColoring, LineFreeReport,
};
use hj_core::nums::{factorial, int_ratio, ratio, ratio_big};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Mutex;

pub struct RunCtx {
    pub command: String,
    pub workers: usize,
    pub seed: u64,
    pub precision: u32,
}

impl RunCtx {
    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            command: self.command.clone(),
            workers: self.workers,
            seed: self.seed,
            precision: self.precision,
        }
    }
}

/// Monochromatic and total line counts per length for a two-valued grid,
/// gathered in a single allocation-free pass.
fn two_grid_line_stats(c: &Coloring) -> Vec<(u64, u64)> {
    let n = c.n() as usize;
    let mut mono = vec![0u64; n + 1];
    let mut total = vec![0u64; n + 1];
    scan_line_ranks(2, c.n(), 1, 1u64 << c.n(), None, |base, step, len, _| {
        total[len as usize] += 1;
        if c.color_rank(base) == c.color_rank(base + step) {
            mono[len as usize] += 1;
        }
    });
    (1..=n).map(|k| (mono[k], total[k])).collect()
}

fn weighted_sum_from_stats(stats: &[(u64, u64)], kappa: u32) -> BigRational {
    (1..=kappa)
        .map(|k| {
            let (mono, total) = stats[k as usize - 1];
            int_ratio((kappa + 1 - k) as u64) * ratio_big(BigUint::from(mono), BigUint::from(total))
        })
        .sum()
}

#[derive(Clone)]
struct SlackAcc {
    checked: u64,
    violations: u64,
    min_slack: Option<BigRational>,
}

impl SlackAcc {
    fn empty() -> Self {
        SlackAcc {
            checked: 0,
            violations: 0,
            min_slack: None,
        }
    }

    fn merge(self, other: Self) -> Self {
        let min_slack = match (self.min_slack, other.min_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        SlackAcc {
            checked: self.checked + other.checked,
            violations: self.violations + other.violations,
            min_slack,
        }
    }
}

pub fn lemma1(
    ctx: &RunCtx,
    n: u32,
    kappa: u32,
    exhaustive: bool,
    samples: u64,
) -> Result<SuiteReport> {
    if kappa < 1 || kappa > n {
        bail!("kappa must lie in 1..=n, got {kappa} for n={n}");
    }
    let timer = Timer::start();
    let rhs = lemma1_rhs(n as u64, kappa, ctx.precision);
    let rhs_hi = rhs.hi.to_rational();
    let scan = |c: &Coloring| {
        let lhs = weighted_sum_from_stats(&two_grid_line_stats(c), kappa);
        let slack = &lhs - &rhs_hi;
        SlackAcc {
            checked: 1,
            violations: u64::from(lhs < rhs_hi),
            min_slack: Some(slack),
        }
    };
    let (mode, acc) = if exhaustive {
        if n > 4 {
            bail!("exhaustive mode enumerates 2^(2^n) colorings; n must be at most 4");
        }
        let total = 1u64 << (1u32 << n);
        let acc = (0..total)
            .into_par_iter()
            .map(|bits| scan(&Coloring::from_words(2, n, "enumerated", vec![bits])))
            .reduce(SlackAcc::empty, SlackAcc::merge);
        ("exhaustive".to_string(), acc)
    } else {
        if samples == 0 {
            bail!("--samples must be positive");
        }
        let acc = (0..samples)
            .into_par_iter()
            .map(|i| scan(&make_random(2, n, ctx.seed.wrapping_add(i))))
            .reduce(SlackAcc::empty, SlackAcc::merge);
        (format!("samples={samples}"), acc)
    };
    let record = timer.record(
        &format!("inequality n={n} kappa={kappa} {mode}"),
        acc.violations == 0,
        values! {
            "checked" => acc.checked,
            "violations" => acc.violations,
            "min_slack" => rational_str(&acc.min_slack.expect("at least one coloring")),
            "rhs" => interval_json(&rhs, ctx.precision),
        },
    );
    Ok(SuiteReport::assemble("lemma1", ctx.echo(), vec![record]))
}

pub fn lemma2(ctx: &RunCtx, n: u32, kappa: u32, samples: u64) -> Result<SuiteReport> {
    if kappa < 1 || 4 * kappa as u64 > n as u64 {
        bail!("kappa must lie in 1..=n/4, got {kappa} for n={n}");
    }
    if n > 12 {
        bail!("n={n} exceeds the desk-scale limit of 12 for a full census");
    }
    if samples == 0 {
        bail!("--samples must be positive");
    }
    let records: Vec<CheckRecord> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let timer = Timer::start();
            let c = make_random(4, n, ctx.seed.wrapping_add(i));
            let rep = lemma2_report(&c, kappa, ctx.precision);
            timer.record(
                &format!("sample {i}"),
                rep.holds,
                values! {
                    "lhs" => rational_str(&rep.lhs),
                    "chernoff_term" => interval_json(&rep.chernoff_term, ctx.precision),
                    "midskip_term" => interval_json(&rep.midskip_term, ctx.precision),
                    "rhs" => interval_json(&rep.rhs, ctx.precision),
                    "holds" => rep.holds,
                },
            )
        })
        .collect();
    Ok(SuiteReport::assemble("lemma2", ctx.echo(), records))
}

fn lemma2_report(c: &Coloring, kappa: u32, prec: u32) -> hj_core::subcube::Lemma2Report {
    hj_core::subcube::lemma2_check(c, kappa, prec).expect("parameters validated by caller")
}

const GADGET_CHUNKS: u32 = 16;
const GADGET_LOW_BITS: u32 = 24;

#[derive(Clone, Copy, Serialize, Deserialize)]
struct BlockJson {
    max_odd: u32,
    attaining: u64,
    steps: u64,
}

#[derive(Serialize, Deserialize, Default)]
struct SweepCheckpoint {
    blocks: BTreeMap<String, BlockJson>,
}

fn merge_blocks(blocks: &BTreeMap<u32, BlockJson>) -> BlockJson {
    let mut max_odd = 0u32;
    let mut attaining = 0u64;
    let mut steps = 0u64;
    for b in blocks.values() {
        steps += b.steps;
        if b.max_odd > max_odd {
            max_odd = b.max_odd;
            attaining = b.attaining;
        } else if b.max_odd == max_odd {
            attaining += b.attaining;
        }
    }
    BlockJson {
        max_odd,
        attaining,
        steps,
    }
}

fn write_sweep_checkpoint(path: &Path, blocks: &BTreeMap<u32, BlockJson>) -> Result<()> {
    let cp = SweepCheckpoint {
        blocks: blocks
            .iter()
            .map(|(k, v)| (format!("{k:02}"), *v))
            .collect(),
    };
    let text = serde_json::to_string_pretty(&cp).context("serializing checkpoint")?;
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_sweep_checkpoint(path: &Path) -> Result<BTreeMap<u32, BlockJson>> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cp: SweepCheckpoint = serde_json::from_str(&text)
        .with_context(|| format!("parsing checkpoint {}", path.display()))?;
    let mut out = BTreeMap::new();
    for (k, v) in cp.blocks {
        let prefix: u32 = k.trim().parse().context("checkpoint block key")?;
        if prefix >= GADGET_CHUNKS {
            bail!("checkpoint block {prefix} out of range");
        }
        out.insert(prefix, v);
    }
    Ok(out)
}

pub fn gadget(
    ctx: &RunCtx,
    check_incidence: bool,
    exhaustive: bool,
    checkpoint: Option<&Path>,
    max_chunks: Option<u32>,
) -> Result<SuiteReport> {
    if !check_incidence && !exhaustive {
        bail!("pass --check-incidence and/or --exhaustive");
    }
    let mut records = Vec::new();
    if check_incidence {
        records.push(incidence_record());
    }
    if exhaustive {
        let timer = Timer::start();
        let done = match checkpoint {
            Some(path) => load_sweep_checkpoint(path)?,
            None => BTreeMap::new(),
        };
        let missing: Vec<u32> = (0..GADGET_CHUNKS)
            .filter(|p| !done.contains_key(p))
            .collect();
        let run_now: Vec<u32> = match max_chunks {
            Some(m) => missing.iter().copied().take(m as usize).collect(),
            None => missing,
        };
        let support = gadget_support();
        let sweep = GadgetSweep::new(&support);
        let state = Mutex::new(done);
        run_now.par_iter().try_for_each(|&prefix| -> Result<()> {
            let stats = sweep.sweep_block(prefix, GADGET_LOW_BITS);
            let mut guard = state.lock().expect("sweep state");
            guard.insert(
                prefix,
                BlockJson {
                    max_odd: stats.max_odd,
                    attaining: stats.attaining,
                    steps: stats.steps,
                },
            );
            if let Some(path) = checkpoint {
                write_sweep_checkpoint(path, &guard)?;
            }
            Ok(())
        })?;
        let blocks = state.into_inner().expect("sweep state");
        let merged = merge_blocks(&blocks);
        if blocks.len() as u32 == GADGET_CHUNKS {
            records.push(timer.record(
                "exhaustive support sweep",
                merged.max_odd < 15 && merged.steps == 1 << 28,
                values! {
                    "max_odd" => merged.max_odd,
                    "attaining_count" => merged.attaining,
                    "assignments_swept" => merged.steps,
                    "none_all_odd" => merged.max_odd < 15,
                },
            ));
        } else {
            records.push(timer.record_status(
                "exhaustive support sweep",
                PARTIAL,
                values! {
                    "chunks_done" => blocks.len(),
                    "chunks_total" => GADGET_CHUNKS,
                    "max_odd_so_far" => merged.max_odd,
                },
            ));
        }
    }
    Ok(SuiteReport::assemble("gadget", ctx.echo(), records))
}

fn incidence_record() -> CheckRecord {
    let timer = Timer::start();
    let rep = incidence_check();
    let support = gadget_support();
    let center = rep.counts[point_rank(&GridPoint::new(vec![1, 2, 3, 4], 4), 4) as usize];
    let twice = rep.counts.iter().filter(|&&c| c == 2).count();
    let total: u32 = rep.counts.iter().sum();
    let pass =
        rep.all_even && support.points.len() == 29 && center == 4 && twice == 28 && total == 60;
    timer.record(
        "incidence parity",
        pass,
        values! {
            "all_even" => rep.all_even,
            "support_size" => support.points.len(),
            "center_incidence" => center,
            "points_covered_twice" => twice,
            "incidence_total" => total,
        },
    )
}

pub fn lemma4(ctx: &RunCtx, n: u32, k: u32, seeds: &[u64]) -> Result<SuiteReport> {
    if k < 1 || 4 * k as u64 > n as u64 {
        bail!("k must lie in 1..=n/4, got {k} for n={n}");
    }
    if n > 10 {
        bail!("n={n} exceeds the desk-scale limit of 10 for a full census");
    }
    let seeds: Vec<u64> = if seeds.is_empty() {
        vec![ctx.seed]
    } else {
        seeds.to_vec()
    };
    let bounds = min_multiplicity(n, k);
    let records: Vec<CheckRecord> = seeds
        .par_iter()
        .map(|&seed| {
            let timer = Timer::start();
            let c = make_random(4, n, seed);
            let p3: [BigRational; 4] =
                core::array::from_fn(|j| line_census(&c, (j as u32 + 1) * k).p3);
            let rep = hj_core::embedding::lemma4_check(&p3, n as u64, k)
                .expect("parameters validated by caller");
            timer.record(
                &format!("seed {seed}"),
                rep.holds,
                values! {
                    "M1" => bounds.m1.to_string(),
                    "M2" => bounds.m2.to_string(),
                    "M3" => bounds.m3.to_string(),
                    "M4" => bounds.m4.to_string(),
                    "lhs" => rational_str(&rep.lhs),
                    "threshold" => "14/15",
                    "holds" => rep.holds,
                    "degenerate" => rep.degenerate,
                },
            )
        })
        .collect();
    Ok(SuiteReport::assemble("lemma4", ctx.echo(), records))
}

pub fn multiplicity(ctx: &RunCtx, n: u32, k: u32, oracle: bool) -> Result<SuiteReport> {
    if k < 1 || 4 * k > n {
        bail!("k must lie in 1..=n/4, got {k} for n={n}");
    }
    if n > 9 {
        bail!("n={n} exceeds the desk-scale limit of 9 for line enumeration");
    }
    if oracle && n > 6 {
        bail!("--oracle enumerates every embedding per line; n must be at most 6");
    }
    let timer = Timer::start();
    let lines: Vec<LinePattern> = (1..=4u32)
        .flat_map(|j| enumerate_lines(4, n, Some(j * k)))
        .collect();
    let (total, min_mult, mismatches) = lines
        .par_iter()
        .map(|l| {
            let m = line_multiplicity(l, k).expect("admissible length");
            let bad = u64::from(oracle && line_multiplicity_oracle(l, k) != m);
            (m.clone(), Some(m), bad)
        })
        .reduce(
            || (BigUint::zero(), None, 0u64),
            |a, b| {
                let min = match (a.1, b.1) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                (a.0 + b.0, min, a.2 + b.2)
            },
        );
    let expected = BigUint::from(15u8) * embedding_count(n, k);
    let identity = total == expected;
    let bounds = min_multiplicity(n, k);
    let pass = identity && mismatches == 0;
    let record = timer.record(
        &format!("recount n={n} k={k}"),
        pass,
        values! {
            "lines_compatible" => lines.len(),
            "total_multiplicity" => total.to_string(),
            "fifteen_fold_embeddings" => expected.to_string(),
            "recount_identity" => identity,
            "min_multiplicity" => min_mult.map(|m| m.to_string()),
            "oracle_checked" => oracle,
            "oracle_mismatches" => mismatches,
            "M1" => bounds.m1.to_string(),
            "M2" => bounds.m2.to_string(),
            "M3" => bounds.m3.to_string(),
            "M4" => bounds.m4.to_string(),
        },
    );
    Ok(SuiteReport::assemble(
        "multiplicity",
        ctx.echo(),
        vec![record],
    ))
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Positive => "positive",
        Verdict::Negative => "negative",
        Verdict::Undecided => "undecided",
    }
}

pub fn bound_certify(ctx: &RunCtx, n: u64, kappa: u32) -> Result<SuiteReport> {
    let timer = Timer::start();
    let cert = certify(n, kappa).map_err(|e| anyhow::anyhow!("{e}"))?;
    let eps = epsilon(n, kappa, cert.precision);
    let record = timer.record(
        &format!("certify n={n} kappa={kappa}"),
        cert.verdict == Verdict::Positive,
        values! {
            "n" => n,
            "kappa" => kappa,
            "verdict" => verdict_str(cert.verdict),
            "precision" => cert.precision,
            "margin" => interval_json(&cert.margin, cert.precision),
            "epsilon" => interval_json(&eps, cert.precision),
            "limit_margin" => rational_str(&limit_margin(kappa)),
        },
    );
    Ok(SuiteReport::assemble("bound", ctx.echo(), vec![record]))
}

pub fn bound_search(ctx: &RunCtx, kappa_min: u32, kappa_max: u32) -> Result<SuiteReport> {
    if kappa_min > kappa_max {
        bail!("--kappa-min must not exceed --kappa-max");
    }
    let kappas: Vec<u32> = (kappa_min..=kappa_max)
        .filter(|k| k % 4 == 0 && *k >= 4)
        .collect();
    if kappas.is_empty() {
        bail!("no multiples of 4 in [{kappa_min}, {kappa_max}]");
    }
    if kappas.len() > 128 {
        bail!(
            "range covers {} window lengths; keep it at 128 or fewer",
            kappas.len()
        );
    }
    let mut records: Vec<CheckRecord> = kappas
        .par_iter()
        .map(|&kappa| {
            let timer = Timer::start();
            if limit_margin(kappa) <= BigRational::zero() {
                return timer.record(
                    &format!("kappa {kappa}"),
                    true,
                    values! {
                        "kappa" => kappa,
                        "bounded" => false,
                        "limit_margin" => rational_str(&limit_margin(kappa)),
                    },
                );
            }
            let minimal = minimal_n_for_kappa(kappa).expect("bounded window");
            let cert = certify(minimal, kappa).expect("validated window");
            let eps = epsilon(minimal, kappa, cert.precision);
            timer.record(
                &format!("kappa {kappa}"),
                cert.verdict == Verdict::Positive,
                values! {
                    "kappa" => kappa,
                    "bounded" => true,
                    "minimal_n" => minimal,
                    "verdict" => verdict_str(cert.verdict),
                    "margin" => interval_json(&cert.margin, cert.precision),
                    "epsilon" => interval_json(&eps, cert.precision),
                },
            )
        })
        .collect();
    let timer = Timer::start();
    match optimize_kappa(&kappas) {
        Ok((kappa, minimal)) => records.push(timer.record(
            "optimum",
            true,
            values! { "kappa" => kappa, "minimal_n" => minimal },
        )),
        Err(e) => {
            records.push(timer.record("optimum", false, values! { "error" => e.to_string() }))
        }
    }
    Ok(SuiteReport::assemble("bound", ctx.echo(), records))
}

pub fn lower_ap_free(
    ctx: &RunCtx,
    length: u32,
    t: u32,
    save: Option<&Path>,
) -> Result<SuiteReport> {
    let ap = APConstraint::new(t).map_err(|e| anyhow::anyhow!("{e}"))?;
    if length < 1 {
        bail!("--N must be positive");
    }
    let timer = Timer::start();
    let record = match search_ap_free(length, &ap) {
        Some(base) => {
            let clean = has_mono_ap(&base, &ap).is_none();
            if let Some(path) = save {
                if !(2..=255).contains(&length) {
                    bail!("interval colorings save as t in 2..=255, got {length}");
                }
                let c = Coloring::from_words(
                    length as u8,
                    1,
                    &format!("progression-free base N={length} t={t}"),
                    base.words().to_vec(),
                );
                save_coloring(path, &c)?;
            }
            timer.record(
                &format!("search N={length} t={t}"),
                clean,
                values! {
                    "length" => length,
                    "t" => t,
                    "found" => true,
                    "verified" => clean,
                    "witness_words" => base.words().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                },
            )
        }
        None => timer.record(
            &format!("search N={length} t={t}"),
            false,
            values! { "length" => length, "t" => t, "found" => false },
        ),
    };
    Ok(SuiteReport::assemble("lower", ctx.echo(), vec![record]))
}

pub fn lower_lift(
    ctx: &RunCtx,
    t: u8,
    n: u32,
    base_path: &Path,
    save: Option<&Path>,
) -> Result<SuiteReport> {
    let base_file = load_coloring(base_path)?;
    if base_file.n() != 1 {
        bail!(
            "base must be a one-dimensional coloring, got n={}",
            base_file.n()
        );
    }
    let timer = Timer::start();
    let base_len = base_file.t() as u32;
    let base = IntervalColoring::new(base_len, base_file.words().to_vec());
    let ap = APConstraint::new(t as u32).map_err(|e| anyhow::anyhow!("{e}"))?;
    let ap_free = has_mono_ap(&base, &ap).is_none();
    let lifted = lift_to_grid(&base, t, n).map_err(|e| anyhow::anyhow!("{e}"))?;
    if let Some(path) = save {
        save_coloring(path, &lifted)?;
    }
    let required = (t as u32 - 1) * n + 1;
    let record = timer.record(
        &format!("lift t={t} n={n}"),
        ap_free,
        values! {
            "t" => t,
            "n" => n,
            "base_length" => base_len,
            "required_length" => required,
            "base_progression_free" => ap_free,
            "points" => lifted.point_count(),
            "label" => lifted.label(),
        },
    );
    Ok(SuiteReport::assemble("lower", ctx.echo(), vec![record]))
}

const VERIFY_CHUNK_MASKS: u64 = 256;

#[derive(Clone, Copy, Serialize, Deserialize)]
struct ChunkJson {
    lines: u64,
    mono: u64,
}

#[derive(Serialize, Deserialize)]
struct VerifyCheckpoint {
    t: u8,
    n: u32,
    chunks: BTreeMap<String, ChunkJson>,
}

fn write_verify_checkpoint(
    path: &Path,
    t: u8,
    n: u32,
    chunks: &BTreeMap<u64, ChunkJson>,
) -> Result<()> {
    let cp = VerifyCheckpoint {
        t,
        n,
        chunks: chunks
            .iter()
            .map(|(k, v)| (format!("{k:06}"), *v))
            .collect(),
    };
    let text = serde_json::to_string_pretty(&cp).context("serializing checkpoint")?;
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load_verify_checkpoint(path: &Path, t: u8, n: u32) -> Result<BTreeMap<u64, ChunkJson>> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cp: VerifyCheckpoint = serde_json::from_str(&text)
        .with_context(|| format!("parsing checkpoint {}", path.display()))?;
    if cp.t != t || cp.n != n {
        bail!(
            "checkpoint was taken for t={} n={}, coloring has t={t} n={n}",
            cp.t,
            cp.n
        );
    }
    let mut out = BTreeMap::new();
    for (k, v) in cp.chunks {
        out.insert(k.trim().parse::<u64>().context("checkpoint chunk key")?, v);
    }
    Ok(out)
}

pub fn lower_verify(
    ctx: &RunCtx,
    coloring_path: &Path,
    checkpoint: Option<&Path>,
    max_chunks: Option<u64>,
) -> Result<SuiteReport> {
    let c = load_coloring(coloring_path)?;
    let (t, n) = (c.t(), c.n());
    if t > 4 {
        bail!("line scanning supports t in 2..=4, got {t}");
    }
    let timer = Timer::start();
    let mask_end = 1u64 << n;
    let chunk_count = (mask_end - 1).div_ceil(VERIFY_CHUNK_MASKS);
    let done = match checkpoint {
        Some(path) => load_verify_checkpoint(path, t, n)?,
        None => BTreeMap::new(),
    };
    let missing: Vec<u64> = (0..chunk_count).filter(|i| !done.contains_key(i)).collect();
    let run_now: Vec<u64> = match max_chunks {
        Some(m) => missing.iter().copied().take(m as usize).collect(),
        None => missing,
    };
    let state = Mutex::new(done);
    run_now.par_iter().try_for_each(|&i| -> Result<()> {
        let lo = 1 + i * VERIFY_CHUNK_MASKS;
        let hi = (lo + VERIFY_CHUNK_MASKS).min(mask_end);
        let rep = verify_line_free_masked(&c, lo, hi);
        let mut guard = state.lock().expect("verify state");
        guard.insert(
            i,
            ChunkJson {
                lines: rep.lines_checked,
                mono: rep.mono_lines,
            },
        );
        if let Some(path) = checkpoint {
            write_verify_checkpoint(path, t, n, &guard)?;
        }
        Ok(())
    })?;
    let chunks = state.into_inner().expect("verify state");
    let lines: u64 = chunks.values().map(|c| c.lines).sum();
    let mono: u64 = chunks.values().map(|c| c.mono).sum();
    let complete = chunks.len() as u64 == chunk_count;
    let expected = line_count(t, n, None);
    let name = format!("line-free t={t} n={n}");
    let record = if complete {
        let pass = mono == 0 && BigUint::from(lines) == expected;
        timer.record(
            &name,
            pass,
            values! {
                "t" => t,
                "n" => n,
                "label" => c.label(),
                "lines_checked" => lines,
                "expected_lines" => expected.to_string(),
                "mono_lines" => mono,
                "line_free" => mono == 0,
            },
        )
    } else {
        timer.record_status(
            &name,
            PARTIAL,
            values! {
                "chunks_done" => chunks.len(),
                "chunks_total" => chunk_count,
                "lines_checked" => lines,
                "mono_lines" => mono,
            },
        )
    };
    Ok(SuiteReport::assemble("lower", ctx.echo(), vec![record]))
}

/// Random expression trees over the certified context, mirrored exactly over
/// the rationals. Returns (enclosure checks, violations).
pub fn interval_fuzz(trees: u64, ops_per_tree: u32, prec: u32, seed: u64) -> (u64, u64) {
    let ctx = IntervalCtx::new(prec);
    (0..trees)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
            fn leaf(rng: &mut ChaCha8Rng) -> BigRational {
                let num = rand_below(rng, 19) as i64 - 9;
                let den = 1 + rand_below(rng, 9) as i64;
                ratio(num, den)
            }
            let mut r = leaf(&mut rng);
            let mut iv = ctx.from_rational(&r);
            let mut checked = 0u64;
            let mut violations = 0u64;
            for _ in 0..ops_per_tree {
                match rand_below(&mut rng, 7) {
                    0 => {
                        let s = leaf(&mut rng);
                        iv = ctx.add(&iv, &ctx.from_rational(&s));
                        r += s;
                    }
                    1 => {
                        let s = leaf(&mut rng);
                        iv = ctx.sub(&iv, &ctx.from_rational(&s));
                        r -= s;
                    }
                    2 => {
                        let s = leaf(&mut rng);
                        iv = ctx.mul(&iv, &ctx.from_rational(&s));
                        r *= s;
                    }
                    3 => {
                        let s = loop {
                            let s = leaf(&mut rng);
                            if !s.is_zero() {
                                break s;
                            }
                        };
                        iv = ctx.div(&iv, &ctx.from_rational(&s));
                        r /= s;
                    }
                    4 => {
                        let s = leaf(&mut rng);
                        iv = ctx.scale(&iv, &s);
                        r *= s;
                    }
                    5 if !iv.lo.is_negative() => {
                        let e = rand_below(&mut rng, 5);
                        iv = ctx.powi(&iv, e);
                        r = r.pow(e as i32);
                    }
                    6 if !iv.lo.is_negative() => {
                        let s = ctx.sqrt(&iv);
                        iv = ctx.mul(&s, &s);
                    }
                    _ => {
                        let s = leaf(&mut rng);
                        iv = ctx.add(&iv, &ctx.from_rational(&s));
                        r += s;
                    }
                }
                checked += 1;
                if !iv.contains_rational(&r) {
                    violations += 1;
                }
            }
            (checked, violations)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

pub fn all(ctx: &RunCtx) -> Result<SuiteReport> {
    let records = vec![
        criterion_01(),
        criterion_02(),
        criterion_03(ctx),
        criterion_04(),
        criterion_05(),
        criterion_06(),
        criterion_07(),
        criterion_08(),
        criterion_09(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
        criterion_13(ctx),
    ];
    Ok(SuiteReport::assemble("all", ctx.echo(), records))
}

fn criterion_01() -> CheckRecord {
    let mut rec = incidence_record();
    rec.name = "01 gadget incidence".to_string();
    rec
}

fn criterion_02() -> CheckRecord {
    let timer = Timer::start();
    let rep = exhaustive_gadget_search();
    let pass =
        rep.max_odd == 14 && rep.attaining_count == 245_760 && rep.assignments_swept == 1 << 28;
    timer.record(
        "02 gadget exhaustive",
        pass,
        values! {
            "max_odd" => rep.max_odd,
            "attaining_count" => rep.attaining_count,
            "assignments_swept" => rep.assignments_swept,
            "none_all_odd" => rep.max_odd < 15,
        },
    )
}

fn criterion_03(ctx: &RunCtx) -> CheckRecord {
    let timer = Timer::start();
    let mut violations = 0u64;
    let mut checked = 0u64;
    // every coloring of the 4-cube, three window lengths
    for kappa in [2u32, 3, 4] {
        let rhs_hi = lemma1_rhs(4, kappa, ctx.precision).hi.to_rational();
        let bad: u64 = (0..1u64 << 16)
            .into_par_iter()
            .map(|bits| {
                let c = Coloring::from_words(2, 4, "enumerated", vec![bits]);
                let lhs = weighted_sum_from_stats(&two_grid_line_stats(&c), kappa);
                u64::from(lhs < rhs_hi)
            })
            .sum();
        violations += bad;
        checked += 1 << 16;
    }
    let exhaustive_violations = violations;
    // random 12-cube colorings, two window lengths per coloring
    let rhs: Vec<BigRational> = [4u32, 8]
        .iter()
        .map(|&k| lemma1_rhs(12, k, ctx.precision).hi.to_rational())
        .collect();
    let bad: u64 = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let c = make_random(2, 12, ctx.seed.wrapping_add(i));
            let stats = two_grid_line_stats(&c);
            [4u32, 8]
                .iter()
                .zip(&rhs)
                .map(|(&kappa, rhs_hi)| u64::from(weighted_sum_from_stats(&stats, kappa) < *rhs_hi))
                .sum::<u64>()
        })
        .sum();
    violations += bad;
    checked += 20_000;
    timer.record(
        "03 hypercube inequality",
        violations == 0,
        values! {
            "exhaustive_colorings" => 1u64 << 16,
            "exhaustive_violations" => exhaustive_violations,
            "sampled_colorings" => 10_000,
            "sampled_violations" => bad,
            "checked" => checked,
            "violations" => violations,
        },
    )
}

fn criterion_04() -> CheckRecord {
    let timer = Timer::start();
    let n = 5u32;
    let perms = all_permutations(n);
    let n_fact = ratio_big(factorial(n as u64), BigUint::one());
    let mut average_exact = true;
    for seed in 0..10u64 {
        let c = make_random(2, n, seed);
        for k in 1..=n {
            let total: BigRational = perms.iter().map(|s| q_k_sigma(&c, s, k)).sum();
            if total / &n_fact != hypercube_q(&c, k) {
                average_exact = false;
            }
        }
    }
    // co-membership: over all orderings, the pair (chain position i, chain
    // position j) lands on fixed points x ⊆ y exactly i!(j-i)!(n-j)! times
    let mut pair_counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for spec in &perms {
        let ranks = chain_ranks(spec);
        for i in 0..ranks.len() {
            for j in i + 1..ranks.len() {
                *pair_counts.entry((ranks[i], ranks[j])).or_insert(0) += 1;
            }
        }
    }
    let mut co_membership_exact = true;
    for (&(a, b), &count) in &pair_counts {
        let i = a.count_ones() as u64;
        let j = b.count_ones() as u64;
        let expect = factorial(i) * factorial(j - i) * factorial(n as u64 - j);
        if BigUint::from(count) != expect {
            co_membership_exact = false;
        }
    }
    let pass = average_exact && co_membership_exact;
    timer.record(
        "04 chain average",
        pass,
        values! {
            "permutations" => perms.len(),
            "seeds" => 10,
            "average_exact" => average_exact,
            "co_membership_pairs" => pair_counts.len(),
            "co_membership_exact" => co_membership_exact,
        },
    )
}

fn criterion_05() -> CheckRecord {
    let timer = Timer::start();
    let bad: u64 = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let c = make_random(4, 4, seed);
            let mut bad = 0u64;
            for k in 1..=4u32 {
                let p = line_census(&c, k);
                if &p.p2 + &p.p3 + &p.p4 != BigRational::one() {
                    bad += 1;
                }
                if p.q != ratio(1, 3) * &p.p2 + ratio(1, 2) * &p.p3 + &p.p4 {
                    bad += 1;
                }
                if p4_from_identity(&p.q, &p.p3) != p.p4 {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    timer.record(
        "05 density identities",
        bad == 0,
        values! { "colorings" => 100, "lengths" => 4, "violations" => bad },
    )
}

fn criterion_06() -> CheckRecord {
    let timer = Timer::start();
    let c = make_checkerboard(4, 6);
    let mut bad = 0u64;
    for k in [1u32, 3, 5] {
        let p = line_census(&c, k);
        if p.p2 != BigRational::one() || p.q != ratio(1, 3) {
            bad += 1;
        }
    }
    timer.record(
        "06 checkerboard",
        bad == 0,
        values! { "odd_lengths" => [1, 3, 5], "violations" => bad },
    )
}

fn criterion_07() -> CheckRecord {
    let timer = Timer::start();
    let n = 5u32;
    let recombination_bad: u64 = (0..10u64)
        .into_par_iter()
        .map(|seed| {
            let c = make_random(4, n, seed);
            let mut bad = 0u64;
            for k in 1..=n {
                let q: BigRational = (k..=n)
                    .map(|m| {
                        let row = typed_census(&c, k, m);
                        type_weight(n, k, m) * row.q_km.expect("populated class")
                    })
                    .sum();
                if q != line_census(&c, k).q {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    let mut weight_bad = 0u64;
    for n in 1..=30u32 {
        for k in 1..=n {
            let total: BigRational = (k..=n).map(|m| type_weight(n, k, m)).sum();
            if total != BigRational::one() {
                weight_bad += 1;
            }
        }
    }
    let pass = recombination_bad == 0 && weight_bad == 0;
    timer.record(
        "07 type recombination",
        pass,
        values! {
            "seeds" => 10,
            "recombination_violations" => recombination_bad,
            "weight_sum_violations" => weight_bad,
        },
    )
}

fn criterion_08() -> CheckRecord {
    let timer = Timer::start();
    // oracle agreement on every line of the 4-cube
    let mut mismatches = 0u64;
    let mut lines_checked = 0u64;
    for l in enumerate_lines(4, 4, None) {
        if line_multiplicity(&l, 1).expect("length within 1..=4") != line_multiplicity_oracle(&l, 1)
        {
            mismatches += 1;
        }
        lines_checked += 1;
    }
    // oracle agreement on 50 pseudo-random short lines of the 6-cube
    let short_lines: Vec<LinePattern> = (1..=4u32)
        .flat_map(|len| enumerate_lines(4, 6, Some(len)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0806);
    let sampled: Vec<&LinePattern> = (0..50)
        .map(|_| &short_lines[rand_below(&mut rng, short_lines.len() as u64) as usize])
        .collect();
    let sampled_mismatches: u64 = sampled
        .par_iter()
        .map(|l| {
            u64::from(
                line_multiplicity(l, 1).expect("length within 1..=4")
                    != line_multiplicity_oracle(l, 1),
            )
        })
        .sum();
    mismatches += sampled_mismatches;
    lines_checked += 50;
    // minimum single-cell multiplicity across the 9-cube versus the
    // balanced-profile floor M1
    let min_mult = (0..=8u64)
        .flat_map(|n1| {
            (0..=8 - n1)
                .flat_map(move |n2| (0..=8 - n1 - n2).map(move |n3| [n1, n2, n3, 8 - n1 - n2 - n3]))
        })
        .map(|profile| {
            let mut cells = vec![Cell::Var];
            for (value, &count) in profile.iter().enumerate() {
                for _ in 0..count {
                    cells.push(Cell::Const(value as u8 + 1));
                }
            }
            line_multiplicity(&LinePattern::new(cells), 1).expect("single-cell line")
        })
        .min()
        .expect("profiles enumerated");
    let m1 = min_multiplicity(9, 1).m1;
    let min_equals_floor = min_mult == m1;
    let pass = mismatches == 0 && min_equals_floor;
    timer.record(
        "08 multiplicity formula",
        pass,
        values! {
            "oracle_lines" => lines_checked,
            "oracle_mismatches" => mismatches,
            "min_multiplicity_9cube" => min_mult.to_string(),
            "balanced_floor_M1" => m1.to_string(),
            "min_equals_floor" => min_equals_floor,
        },
    )
}

fn criterion_09() -> CheckRecord {
    let timer = Timer::start();
    let inequality_bad: u64 = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let c = make_random(4, 5, seed);
            let p3: [BigRational; 4] = core::array::from_fn(|j| line_census(&c, j as u32 + 1).p3);
            let rep = hj_core::embedding::lemma4_check(&p3, 5, 1).expect("valid parameters");
            u64::from(!rep.holds)
        })
        .sum();
    let per_embedding: Vec<u32> = (0..5u64)
        .into_par_iter()
        .map(|seed| {
            let c = make_random(4, 4, seed);
            weighted_odd_count_identity(&c, 1).per_embedding_max
        })
        .collect();
    let max_per_embedding = per_embedding.iter().copied().max().expect("seeds scanned");
    let pass = inequality_bad == 0 && max_per_embedding <= 14;
    timer.record(
        "09 odd-line bound",
        pass,
        values! {
            "colorings" => 20,
            "inequality_violations" => inequality_bad,
            "per_embedding_max" => max_per_embedding,
            "per_embedding_ceiling" => 14,
        },
    )
}

fn criterion_10() -> CheckRecord {
    let timer = Timer::start();
    let mut ok = true;
    let mut vals = BTreeMap::new();
    for (name, n, kappa, expect) in [
        (
            "certify_1e11_368",
            100_000_000_000u64,
            368u32,
            Verdict::Positive,
        ),
        (
            "certify_threshold_240",
            19_012_590_257,
            240,
            Verdict::Positive,
        ),
        ("certify_1e9_240", 1_000_000_000, 240, Verdict::Negative),
    ] {
        let t = std::time::Instant::now();
        let cert = certify(n, kappa).expect("valid parameters");
        let ms = t.elapsed().as_millis() as u64;
        let good = cert.verdict == expect && ms < 1000;
        ok &= good;
        vals.insert(
            name.to_string(),
            json!({
                "verdict": verdict_str(cert.verdict),
                "expected": verdict_str(expect),
                "elapsed_ms": ms,
            }),
        );
    }
    let minimal = minimal_n_for_kappa(240).expect("bounded window");
    let minimal_ok = minimal <= 19_012_590_257;
    ok &= minimal_ok;
    vals.insert("minimal_n_240".to_string(), json!(minimal));
    vals.insert("minimal_n_within_threshold".to_string(), json!(minimal_ok));
    timer.record("10 bound constants", ok, vals)
}

fn criterion_11() -> CheckRecord {
    let timer = Timer::start();
    let mut vals = BTreeMap::new();
    let mut all_positive = true;
    let mut sums_match = true;
    for kappa in [4u32, 240] {
        let r = r_series(kappa).expect("multiple of 4");
        let negatives = r.negatives();
        all_positive &= negatives.is_empty();
        let expect = ratio(
            (5 * kappa as i64 * kappa as i64 + 8 * kappa as i64) as i64,
            16,
        );
        sums_match &= r.sum() == expect;
        vals.insert(
            format!("kappa_{kappa}"),
            json!({
                "all_positive": negatives.is_empty(),
                "negatives": negatives
                    .iter()
                    .map(|(k, v)| json!({ "k": k, "value": rational_str(v) }))
                    .collect::<Vec<_>>(),
                "sum": rational_str(&r.sum()),
                "expected_sum": rational_str(&expect),
            }),
        );
    }
    // pull-out identity on random rational coefficient vectors
    let mix = gadget_length_mix();
    let mut pull_out = true;
    for kappa in [4u32, 240] {
        for seed in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed * 31 + kappa as u64);
            let q: Vec<BigRational> = (0..kappa)
                .map(|_| ratio(rand_below(&mut rng, 301) as i64, 300))
                .collect();
            let lhs: BigRational = (1..=kappa)
                .map(|k| int_ratio((kappa + 1 - k) as u64) * &q[k as usize - 1])
                .sum();
            let r = r_series(kappa).expect("multiple of 4");
            let mut rhs: BigRational = (1..=kappa).map(|k| r.value(k) * &q[k as usize - 1]).sum();
            for kp in 1..=kappa / 4 {
                let mixed: BigRational = (1..=4u32)
                    .filter(|j| j * kp <= kappa)
                    .map(|j| &mix[j as usize - 1] * &q[(j * kp) as usize - 1])
                    .sum();
                rhs += int_ratio((kappa + 1 - 2 * kp) as u64) * mixed;
            }
            pull_out &= lhs == rhs;
        }
    }
    vals.insert("pull_out_identity".to_string(), json!(pull_out));
    let pass = all_positive && sums_match && pull_out;
    timer.record("11 window series", pass, vals)
}

fn criterion_12() -> CheckRecord {
    let timer = Timer::start();
    let mut vals = BTreeMap::new();
    let ap4 = APConstraint::new(4).expect("t=4");
    let base = search_ap_free(34, &ap4);
    let base_found = base.is_some();
    vals.insert("base_34_found".to_string(), json!(base_found));
    let mut lifted_clean = false;
    let mut lifted_lines = 0u64;
    if let Some(base) = &base {
        let lifted = lift_to_grid(base, 4, 11).expect("34 >= 3*11+1");
        let rep = parallel_line_free(&lifted);
        lifted_clean = rep.line_free() && rep.lines_checked == 44_633_821;
        lifted_lines = rep.lines_checked;
    }
    vals.insert("lifted_lines_checked".to_string(), json!(lifted_lines));
    vals.insert("lifted_line_free".to_string(), json!(lifted_clean));
    let hj32 = verify_line_free(&hj32_witness());
    let hj32_ok = hj32.line_free() && hj32.lines_checked == 37;
    vals.insert("hj32_lines_checked".to_string(), json!(hj32.lines_checked));
    vals.insert("hj32_line_free".to_string(), json!(hj32_ok));
    // HJ(2, r) = r instances: every 2-coloring of the square grid has a
    // monochromatic line, while the 2-point segment splits cleanly
    let square_all_mono = (0..16u64).all(|bits| {
        verify_line_free(&Coloring::from_words(2, 2, "enumerated", vec![bits])).mono_lines > 0
    });
    let segment_free =
        verify_line_free(&Coloring::from_words(2, 1, "split", vec![0b01])).line_free();
    vals.insert("square_all_have_mono".to_string(), json!(square_all_mono));
    vals.insert("segment_has_line_free".to_string(), json!(segment_free));
    let pass = base_found && lifted_clean && hj32_ok && square_all_mono && segment_free;
    timer.record("12 lower bounds", pass, vals)
}

fn parallel_line_free(c: &Coloring) -> LineFreeReport {
    let mask_end = 1u64 << c.n();
    let chunk_count = (mask_end - 1).div_ceil(VERIFY_CHUNK_MASKS);
    (0..chunk_count)
        .into_par_iter()
        .map(|i| {
            let lo = 1 + i * VERIFY_CHUNK_MASKS;
            let hi = (lo + VERIFY_CHUNK_MASKS).min(mask_end);
            verify_line_free_masked(c, lo, hi)
        })
        .reduce(
            || LineFreeReport {
                t: c.t(),
                n: c.n(),
                lines_checked: 0,
                mono_lines: 0,
            },
            |a, b| a.merge(&b),
        )
}

fn criterion_13(ctx: &RunCtx) -> CheckRecord {
    let timer = Timer::start();
    let (checked, violations) = interval_fuzz(2500, 4, ctx.precision, ctx.seed);
    timer.record(
        "13 interval soundness",
        checked == 10_000 && violations == 0,
        values! { "expressions" => checked, "violations" => violations },
    )
}
