use std::io::Write;

use anyhow::{bail, Context, Result};
use qea_core::bench::{compare as compare_circuit, run_benchmark, to_jsonl, BenchOptions, BenchReport, NamedCircuit};
use qea_core::circuit::transpile;
use qea_core::engine::{run_circuit, write_dump, AnyState, Arithmetic, FixedState, FloatState};
use qea_core::generators::{generate_suite_template, generate_template, template_suite};
use qea_core::pe_model::{calibrate_overhead, estimate_cycles, estimate_memory_matmul, estimate_memory_qea};
use serde_json::json;

use crate::io;
use crate::{BenchArgs, BenchSuite, CompareArgs, EstimateArgs, RunArgs};

pub fn run(a: &RunArgs, out: &mut dyn Write) -> Result<bool> {
    let entry = io::single_source(a.file.as_deref(), a.generate.as_deref())?;
    let tc = transpile(&entry.circuit);
    let n = tc.n;
    let (state, stats) = match a.arith {
        Arithmetic::Fixed => {
            let (s, st) = run_circuit(&tc, FixedState::zero_state(n)?)?;
            (AnyState::Fixed(s), st)
        }
        Arithmetic::Float => {
            let (s, st) = run_circuit(&tc, FloatState::zero_state(n)?)?;
            (AnyState::Float(s), st)
        }
    };

    let mut dump = Vec::new();
    write_dump(&mut dump, &state)?;
    let summary = format!(
        "{}: n={n} arith={} transpiled gates={} (sparse {}, dense {}, cx {}) global_phase={:.12} wall_time={:.6} s",
        entry.name,
        a.arith,
        tc.len(),
        stats.sparse,
        stats.dense,
        stats.cx,
        tc.global_phase,
        stats.wall_time.as_secs_f64()
    );
    match &a.out {
        Some(path) => {
            io::write_atomic(path, &dump)?;
            writeln!(out, "{summary}")?;
        }
        None => {
            out.write_all(&dump)?;
            eprintln!("{summary}");
        }
    }
    if let Some(path) = &a.stats {
        let record = json!({
            "name": entry.name,
            "n": n,
            "arith": a.arith.to_string(),
            "gates_source": entry.circuit.len(),
            "gates_transpiled": tc.len(),
            "global_phase": tc.global_phase,
            "stats": stats,
        });
        io::write_atomic(path, format!("{record:#}\n").as_bytes())?;
    }
    Ok(true)
}

fn bench_suite(suite: &BenchSuite) -> Result<Vec<NamedCircuit>> {
    match suite {
        BenchSuite::Qft { qubits } => qubits.clone().map(|n| io::generate(&format!("qft:{n}"))).collect(),
        BenchSuite::Template { topology, qubits, layers, seed } => qubits
            .clone()
            .map(|n| {
                let c = generate_template(*topology, n, *layers, *seed)?;
                Ok(NamedCircuit::new(format!("{topology}:{n}:{layers}:{seed}"), c))
            })
            .collect(),
        BenchSuite::Circuits { files, generate } => io::sources(files, generate),
    }
}

fn print_bench_table(out: &mut dyn Write, rows: &[(String, Result<&BenchReport, String>)]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<24} {:>3} {:>6} {:>10} {:>10} {:>11} {:>11} {:>10} {:>10} {:>10}",
        "circuit", "n", "gates", "1-fid", "mse", "wall s", "modeled s", "ngs wall", "ngs model", "cross-pe"
    )?;
    for (name, row) in rows {
        match row {
            Ok(r) => writeln!(
                out,
                "{:<24} {:>3} {:>6} {:>10.2e} {:>10.2e} {:>11.4e} {:>11.4e} {:>10.3e} {:>10.3e} {:>10}",
                r.name,
                r.n,
                r.gates(),
                1.0 - r.fidelity,
                r.mse,
                r.wall_time_s,
                r.modeled_time_s,
                r.ngs_wall,
                r.ngs_modeled,
                r.cross_pe_accesses
            )?,
            Err(e) => writeln!(out, "{name:<24} FAILED: {e}")?,
        }
    }
    Ok(())
}

pub fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = a.pe.config();
    cfg.validate()?;
    let suite = bench_suite(&a.suite)?;
    if suite.is_empty() {
        bail!("nothing to benchmark");
    }
    let opts = BenchOptions { repeats: a.repeats.max(1), parallel_entries: a.parallel };
    let results = run_benchmark(&suite, &cfg, &opts);

    let rows: Vec<_> = suite
        .iter()
        .zip(&results)
        .map(|(entry, r)| (entry.name.clone(), r.as_ref().map_err(|e| e.to_string())))
        .collect();
    print_bench_table(out, &rows)?;

    let reports: Vec<BenchReport> = results.iter().filter_map(|r| r.as_ref().ok().cloned()).collect();
    io::write_atomic(&a.out, to_jsonl(&reports).as_bytes())?;
    let failed = results.len() - reports.len();
    writeln!(out, "{} reports written to {}, {failed} failed", reports.len(), a.out.display())?;
    for (entry, r) in suite.iter().zip(&results) {
        if let Err(e) = r {
            eprintln!("error: {}: {e}", entry.name);
        }
    }
    Ok(failed == 0)
}

pub fn compare(a: &CompareArgs, out: &mut dyn Write) -> Result<bool> {
    let mut entries = io::sources(&a.files, &a.generate)?;
    if a.suite {
        for t in template_suite() {
            let c = generate_suite_template(t.id, a.qubits, a.seed)
                .with_context(|| format!("template {} at {} qubits", t.id, a.qubits))?;
            entries.push(NamedCircuit::new(format!("template-{} ({} x{})", t.id, t.topology, t.layers), c));
        }
    }
    if entries.is_empty() {
        bail!("no circuits: give files, --generate or --suite");
    }

    writeln!(
        out,
        "{:<28} {:>3} {:>6} {:>18} {:>10} {:>10} {:>11}",
        "circuit", "n", "gates", "fidelity", "1-fid", "mse", "norm err"
    )?;
    let mut ok = true;
    for e in &entries {
        let tc = transpile(&e.circuit);
        match compare_circuit(&tc) {
            Ok(c) => writeln!(
                out,
                "{:<28} {:>3} {:>6} {:>18.15} {:>10.2e} {:>10.2e} {:>11.2e}",
                e.name,
                tc.n,
                tc.len(),
                c.fidelity,
                1.0 - c.fidelity,
                c.mse,
                c.norm_error
            )?,
            Err(err) => {
                ok = false;
                writeln!(out, "{:<28} FAILED: {err}", e.name)?;
            }
        }
    }
    Ok(ok)
}

pub fn estimate(a: &EstimateArgs, out: &mut dyn Write) -> Result<bool> {
    let cfg = a.pe.config();
    cfg.validate()?;
    let circuit = match (&a.file, &a.generate) {
        (None, None) => None,
        (file, spec) => Some(io::single_source(file.as_deref(), spec.as_deref())?),
    };
    if a.qubits.is_none() && circuit.is_none() {
        bail!("give --qubits, a circuit file or --generate");
    }
    if a.calibrate.is_some() && circuit.is_none() {
        bail!("--calibrate needs a circuit");
    }

    let mut memory = Vec::new();
    if let Some(range) = &a.qubits {
        writeln!(out, "{:>3} {:>12} {:>24} {:>14} {:>8}", "n", "qea bytes", "matmul bytes", "ratio", "log10")?;
        for n in range.clone() {
            let qea = estimate_memory_qea(n, a.gates);
            let matmul = estimate_memory_matmul(n);
            let ratio = matmul as f64 / qea as f64;
            writeln!(out, "{n:>3} {qea:>12} {matmul:>24} {ratio:>14.2} {:>8.3}", ratio.log10())?;
            memory.push(json!({ "n": n, "gates": a.gates, "qea_bytes": qea, "matmul_bytes": matmul, "ratio": ratio }));
        }
    }

    let mut cycles = None;
    let mut calibration = None;
    if let Some(entry) = &circuit {
        let tc = transpile(&entry.circuit);
        let r = estimate_cycles(&tc, &cfg)?;
        writeln!(out, "{}: n={} transpiled gates={}", entry.name, tc.n, tc.len())?;
        for (class, c) in [("sparse", r.sparse), ("dense", r.dense), ("cx", r.cx)] {
            writeln!(out, "  {class:<7} gates={:<6} cycles={}", c.gates, c.cycles)?;
        }
        writeln!(
            out,
            "  cross-PE accesses={} penalty cycles={} overhead cycles={}",
            r.cross_pe_accesses, r.penalty_cycles, r.overhead_cycles
        )?;
        writeln!(out, "  total cycles={} modeled time={:.6e} s at {} Hz", r.total_cycles, r.modeled_time_s, r.freq_hz)?;
        let qea = estimate_memory_qea(tc.n, tc.len());
        let matmul = estimate_memory_matmul(tc.n);
        writeln!(out, "  memory: qea={qea} B matmul={matmul} B ratio={:.2}", matmul as f64 / qea as f64)?;
        if let Some(target) = a.calibrate {
            let cal = calibrate_overhead(&tc, &cfg, target)?;
            writeln!(
                out,
                "  calibrated per_gate_overhead_cycles={} raw={:.6e} s calibrated={:.6e} s target={target:e} s",
                cal.per_gate_overhead_cycles, cal.raw_time_s, cal.calibrated_time_s
            )?;
            calibration = Some(cal);
        }
        cycles = Some(r);
    }

    if let Some(path) = &a.out {
        let record = json!({ "memory": memory, "cycles": cycles, "calibration": calibration });
        io::write_atomic(path, format!("{record:#}\n").as_bytes())?;
    }
    Ok(true)
}
