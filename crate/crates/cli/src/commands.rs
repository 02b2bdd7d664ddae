use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use warsparse::adversary::{run_scenario, scenario_passed, Scenario, ScenarioConfig};
use warsparse::dist::{dist_setup, run_protocol, DistError, Transport};
use warsparse::pfhe::{Digest, DigestSource, PointCache};
use warsparse::recovery::{RecoveryParams, SyndromeState};
use warsparse::stream::{
    accumulate, format_trace, parse_trace_for, random_stream, StreamState, TraceRecord, UpdatePath,
};
use warsparse::Exec;

use crate::config::{
    AttackArgs, BenchArgs, Config, DistArgs, Failure, GenArgs, StreamArgs, TransportArg,
};

fn read_input(path: &Path) -> Result<String, Failure> {
    let read = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    read.map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn read_trace(path: &Path, n: u64) -> Result<Vec<TraceRecord>, Failure> {
    let text = read_input(path)?;
    parse_trace_for(&text, n).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn io_fail(e: io::Error) -> Failure {
    Failure::Transport(format!("writing output: {e}"))
}

pub fn stream(cfg: &Config, args: &StreamArgs) -> Result<(), Failure> {
    let params = cfg.stream_params()?;
    let trace = read_trace(&args.trace, params.n)?;
    let path = if cfg.naive {
        UpdatePath::Naive
    } else {
        UpdatePath::Batched
    };
    let mut state = StreamState::setup(params, cfg.seed_bytes())
        .with_update_path(path)
        .with_cache_capacity(cfg.memo);
    let mut out = BufWriter::new(io::stdout().lock());
    for r in trace {
        match r {
            TraceRecord::Update(i, d) => state
                .update(i, d)
                .map_err(|e| Failure::Param(e.to_string()))?,
            TraceRecord::Query => writeln!(out, "{}", state.report()).map_err(io_fail)?,
        }
    }
    out.flush().map_err(io_fail)
}

pub fn dist(cfg: &Config, args: &DistArgs) -> Result<(), Failure> {
    let params = cfg.stream_params()?;
    let partitions = args
        .partitions
        .iter()
        .map(|p| read_trace(p, params.n).map(|t| accumulate(&t, params.n)))
        .collect::<Result<Vec<_>, _>>()?;
    let setup = dist_setup(&params, cfg.seed_bytes());
    let cache = (cfg.memo > 0).then(|| {
        Arc::new(PointCache::new(
            Arc::new(setup.digest.clone()),
            params.n,
            cfg.memo,
        ))
    });
    let transport = match args.transport {
        TransportArg::Inproc => Transport::InProcess,
        TransportArg::Tcp => Transport::Loopback { port: args.port },
    };
    let run = run_protocol(&setup, &partitions, transport, cache, Exec::default()).map_err(
        |e| match e {
            DistError::Bind { .. } | DistError::Transport { .. } | DistError::Wire { .. } => {
                Failure::Transport(e.to_string())
            }
            DistError::Param(_) => Failure::Param(e.to_string()),
            other => Failure::Parse(other.to_string()),
        },
    )?;
    println!("{}", run.result.outcome);
    eprintln!("# setup_bytes={}", run.setup_bytes);
    for (ops, bytes) in run.server_ops.iter().zip(&run.packet_bytes) {
        eprintln!(
            "# server={} nonzeros={} ct_mults={} field_mults={} packet_bytes={}",
            ops.server, ops.nonzeros, ops.ct_mults, ops.field_mults, bytes
        );
    }
    eprintln!(
        "# coordinator field_mults={} hash_evals={}",
        run.report.field_mults, run.report.hash_evals
    );
    Ok(())
}

pub fn attack(cfg: &Config, args: &AttackArgs) -> Result<(), Failure> {
    let scenario: Scenario = args.scenario.parse().map_err(Failure::Usage)?;
    cfg.check_secure()?;
    let sc = ScenarioConfig {
        n: cfg.n,
        k: cfg.k,
        bound: cfg.bound,
        g: cfg.g,
        beta: cfg.beta,
        trials: args.trials,
        rounds: args.rounds,
        max_rounds: args.max_rounds,
        seed: cfg.seed_bytes(),
    };
    let records =
        run_scenario(scenario, &sc, Exec::default()).map_err(|e| Failure::Param(e.to_string()))?;
    let mut out = BufWriter::new(io::stdout().lock());
    for r in &records {
        writeln!(out, "{}", r.to_json_line()).map_err(io_fail)?;
    }
    out.flush().map_err(io_fail)?;
    if scenario_passed(scenario, &records) {
        Ok(())
    } else if scenario.expects_incorrect() {
        Err(Failure::Check(format!(
            "{scenario}: no incorrect response observed without verification"
        )))
    } else {
        let bad = records.iter().filter(|r| r.incorrect > 0).count();
        Err(Failure::Check(format!(
            "{scenario}: {bad} trials with incorrect responses"
        )))
    }
}

fn log2_sq(k: usize) -> f64 {
    let l = (k as f64).log2().max(1.0);
    k as f64 * l * l
}

pub fn bench(cfg: &Config, args: &BenchArgs) -> Result<(), Failure> {
    let params = cfg.stream_params()?;
    let pf = params.pfhe;
    let seed = cfg.seed_bytes();
    let mut rng = ChaCha20Rng::from_seed(seed);
    let mut out = BufWriter::new(io::stdout().lock());
    let w = |out: &mut BufWriter<io::StdoutLock>, s: String| writeln!(out, "{s}").map_err(io_fail);

    w(
        &mut out,
        format!(
            "# n={} k={} N={} g={} q=2^{} beta={} h={} ell={} p={}",
            params.n,
            params.k,
            params.bound,
            pf.g,
            pf.q.bits(),
            pf.beta,
            pf.h(),
            pf.ell,
            params.recovery.p.value()
        ),
    )?;
    let state = StreamState::setup(params, seed);
    let explicit = Digest {
        source: DigestSource::Explicit,
        ..(**state.digest()).clone()
    };
    w(
        &mut out,
        format!("digest_bytes_seeded {}", state.digest().to_bytes().len()),
    )?;
    w(
        &mut out,
        format!("digest_bytes_explicit {}", explicit.to_bytes().len()),
    )?;
    w(&mut out, format!("state_bytes {}", state.to_bytes().len()))?;

    let mut s = state.clone();
    let updates = random_stream(&mut rng, params.n, params.bound, 4 * params.k, params.k);
    for r in &updates {
        if let TraceRecord::Update(i, d) = *r {
            s.update(i, d).map_err(|e| Failure::Param(e.to_string()))?;
        }
    }
    let nonzero = updates
        .iter()
        .filter(|r| matches!(r, TraceRecord::Update(_, d) if *d != 0))
        .count() as u64;
    w(
        &mut out,
        format!(
            "per_update_ct_mults {} (ell = {})",
            s.ct_mults() / nonzero.max(1),
            pf.ell
        ),
    )?;
    let (report, stats) = s.report_with_stats();
    w(
        &mut out,
        format!(
            "report_hash_evals {} (k = {}, support = {}) report_field_mults {}",
            stats.hash_evals,
            params.k,
            report.vector().map_or(0, |v| v.support_size()),
            stats.field_mults
        ),
    )?;

    w(&mut out, "# k batch_field_mults per_update_batched per_update_naive batched/naive c=batch/(k·log2²k) digest_bytes".into())?;
    for &k in &args.ks {
        let rp = RecoveryParams::new(params.n, k, params.bound)
            .map_err(|e| Failure::Param(e.to_string()))?;
        let mut batched = SyndromeState::new(rp);
        let mut naive = SyndromeState::new(rp);
        let total = 2 * k * args.batches.max(1);
        for r in random_stream(&mut rng, params.n, params.bound, total, k) {
            if let TraceRecord::Update(i, d) = r {
                batched
                    .update_batched(i, d)
                    .map_err(|e| Failure::Param(e.to_string()))?;
                naive
                    .update_naive(i, d)
                    .map_err(|e| Failure::Param(e.to_string()))?;
            }
        }
        batched.flush();
        let b = batched.ops();
        let per_batch = b.batched_mults as f64 / b.flushes.max(1) as f64;
        let per_b = b.batched_mults as f64 / total as f64;
        let per_n = naive.ops().naive_mults as f64 / total as f64;
        w(
            &mut out,
            format!(
                "{k} {per_batch:.0} {per_b:.1} {per_n:.1} {:.3} {:.2} {}",
                per_b / per_n,
                per_batch / log2_sq(k),
                state.digest().to_bytes().len()
            ),
        )?;
    }

    let partitions: Vec<Vec<i64>> = (0..2)
        .map(|_| {
            accumulate(
                &random_stream(
                    &mut rng,
                    params.n,
                    (params.bound / 2).max(1),
                    2 * params.k,
                    params.k / 2,
                ),
                params.n,
            )
        })
        .collect();
    let setup = dist_setup(&params, seed);
    let run = run_protocol(
        &setup,
        &partitions,
        Transport::InProcess,
        None,
        Exec::default(),
    )
    .map_err(|e| Failure::Transport(e.to_string()))?;
    for (ops, bytes) in run.server_ops.iter().zip(&run.packet_bytes) {
        w(
            &mut out,
            format!(
                "server {} nonzeros={} ct_mults={} field_mults={} packet_bytes={}",
                ops.server, ops.nonzeros, ops.ct_mults, ops.field_mults, bytes
            ),
        )?;
    }
    w(&mut out, format!("setup_bytes {}", run.setup_bytes))?;
    out.flush().map_err(io_fail)
}

pub fn gen(cfg: &Config, args: &GenArgs) -> Result<(), Failure> {
    let support = args.sparsity.unwrap_or(cfg.k);
    if support as u64 > cfg.n {
        return Err(Failure::Param(format!(
            "sparsity ≤ n fails: sparsity = {support}, n = {}",
            cfg.n
        )));
    }
    if cfg.bound == 0 {
        return Err(Failure::Param("N ≥ 1 required".into()));
    }
    let mut rng = ChaCha20Rng::from_seed(cfg.seed_bytes());
    let updates = random_stream(&mut rng, cfg.n, cfg.bound, args.updates, support);
    let mut records = Vec::with_capacity(updates.len() + 1);
    for (c, u) in updates.into_iter().enumerate() {
        records.push(u);
        if args.query_every > 0 && (c + 1) % args.query_every == 0 {
            records.push(TraceRecord::Query);
        }
    }
    if records.last() != Some(&TraceRecord::Query) {
        records.push(TraceRecord::Query);
    }
    let mut out = BufWriter::new(io::stdout().lock());
    write!(
        out,
        "# n={} N={} sparsity={} seed={}\n{}",
        cfg.n,
        cfg.bound,
        support,
        cfg.seed,
        format_trace(&records)
    )
    .map_err(io_fail)?;
    out.flush().map_err(io_fail)
}
