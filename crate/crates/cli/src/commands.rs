use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use sopfault::{
    analyze, format_percentage, generate, is_distinguishing, minimal_distinguishing_set, Analysis, GenParams,
    Options, OracleLimits,
};

use crate::views::{DictView, FaultsView, MinimizeView, SimulateView, VerifyView};
use crate::{Ctx, Format};

type Output = Result<(String, bool)>;

fn analyze_input(ctx: &Ctx, input: &str) -> Result<Analysis> {
    let expr = ctx.load(input)?;
    let options = Options {
        row_cap: ctx.row_cap(),
    };
    Ok(analyze(&expr, &options)?)
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn dict(ctx: &Ctx, input: &str) -> Output {
    let format = ctx.format_or(Format::Csv, &[Format::Csv, Format::Json])?;
    let a = analyze_input(ctx, input)?;
    let text = match format {
        Format::Json => json(&DictView::new(&a))?,
        _ => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let n = a.expr.n();
            let header = (1..=n)
                .map(|i| format!("x{i}"))
                .chain(std::iter::once("z".to_string()))
                .chain((0..a.classes.len()).map(|k| format!("f{k}")));
            w.write_record(header)?;
            for row in a.dictionary.rows() {
                let bit = |b: bool| if b { "1" } else { "0" };
                let record = row
                    .inputs
                    .bits
                    .iter()
                    .map(|&b| bit(b))
                    .chain(std::iter::once(bit(row.z)))
                    .chain(row.faults.iter().map(|&b| bit(b)));
                w.write_record(record)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    Ok((text, true))
}

pub fn faults(ctx: &Ctx, input: &str) -> Output {
    let format = ctx.format_or(Format::Json, &[Format::Json, Format::Text])?;
    let a = analyze_input(ctx, input)?;
    let text = match format {
        Format::Json => json(&FaultsView::new(&a))?,
        _ => {
            let mut s = format!(
                "{}: {} faults, {} classes, {} undetectable\n",
                a.expr,
                a.faults.len(),
                a.classes.len(),
                a.undetectable.faults.len()
            );
            for c in &a.classes {
                let members: Vec<String> = c.members.iter().map(|f| format!("#{} {f}", f.fault_id)).collect();
                writeln!(s, "class {}: {}", c.class_id, members.join(", "))?;
            }
            for f in &a.undetectable.faults {
                writeln!(s, "undetectable: #{} {f}", f.fault_id)?;
            }
            s
        }
    };
    Ok((text, true))
}

pub fn minimize(ctx: &Ctx, input: &str, timing: bool) -> Output {
    let format = ctx.format_or(Format::Json, &[Format::Json, Format::Text])?;
    let a = analyze_input(ctx, input)?;
    let text = match format {
        Format::Json => json(&MinimizeView::new(&a, timing))?,
        _ => {
            let r = &a.report;
            let mut s = format!("expression: {}\n", a.expr);
            writeln!(s, "inputs n: {}", r.n)?;
            writeln!(s, "total tests a: {}", r.a)?;
            writeln!(
                s,
                "faults: {} ({} classes, {} undetectable)",
                r.fault_count_raw,
                r.class_count,
                a.undetectable.faults.len()
            )?;
            writeln!(s, "minimized tests b: {}", r.b)?;
            writeln!(s, "minimization: {}%", r.percentage_display())?;
            if timing {
                writeln!(s, "elapsed: {:.6}s", r.elapsed_seconds)?;
            }
            writeln!(
                s,
                "tree depth: {} (lower bound {})",
                a.tree.depth(),
                a.tree.min_levels()
            )?;
            let n = a.expr.n();
            for &t in &a.tests.final_tests {
                writeln!(s, "test {t}: {t:0n$b}")?;
            }
            s
        }
    };
    Ok((text, true))
}

pub fn tree(ctx: &Ctx, input: &str) -> Output {
    let format = ctx.format_or(Format::Dot, &[Format::Dot, Format::Text])?;
    let a = analyze_input(ctx, input)?;
    let text = match format {
        Format::Dot => a.tree.to_dot(),
        _ => a.tree.to_ascii(),
    };
    Ok((text, true))
}

pub fn simulate(ctx: &Ctx, input: &str, fault: &str) -> Output {
    let format = ctx.format_or(Format::Text, &[Format::Text, Format::Json])?;
    let a = analyze_input(ctx, input)?;
    let injected = if fault.eq_ignore_ascii_case("none") {
        None
    } else {
        Some(
            fault
                .parse::<usize>()
                .with_context(|| format!("fault must be a fault id or NONE, got {fault:?}"))?,
        )
    };
    let transcript = a.simulate(injected)?;
    let view = SimulateView::new(&a, &transcript);
    let text = match format {
        Format::Json => json(&view)?,
        _ => {
            let mut s = match &view.injected {
                Some(f) => format!("injected: #{} {}\n", f.fault_id, f.fault),
                None => "injected: NONE\n".to_string(),
            };
            for step in &view.steps {
                writeln!(
                    s,
                    "T{} {} expected {} observed {} -> {}",
                    step.test, step.inputs, step.expected, step.observed, step.detected
                )?;
            }
            if view.diagnosed_members.is_empty() {
                writeln!(s, "diagnosis: {}", view.diagnosis)?;
            } else {
                writeln!(
                    s,
                    "diagnosis: class {} [{}]",
                    view.diagnosis,
                    view.diagnosed_members.join(", ")
                )?;
            }
            writeln!(s, "consistent: {}", view.consistent)?;
            s
        }
    };
    Ok((text, transcript.consistent))
}

pub fn verify(ctx: &Ctx, input: &str, limits: OracleLimits) -> Output {
    let format = ctx.format_or(Format::Text, &[Format::Text, Format::Json])?;
    let a = analyze_input(ctx, input)?;
    let t = &a.table;
    let exact = minimal_distinguishing_set(t, &limits)?;
    let fin = &a.final_positions;
    let heuristic_valid = is_distinguishing(t, fin);
    let heuristic_minimal = (0..fin.len()).all(|i| {
        let mut fewer = fin.clone();
        fewer.remove(i);
        !is_distinguishing(t, &fewer)
    });
    let tests = |ps: &[usize]| -> Vec<usize> { ps.iter().map(|&p| t.tests()[p]).collect() };
    let view = VerifyView {
        expression: a.expr.to_string(),
        class_count: t.class_count(),
        table_rows: t.test_count(),
        heuristic_tests: tests(fin),
        oracle_tests: tests(&exact),
        heuristic_size: fin.len(),
        oracle_size: exact.len(),
        gap: fin.len() as i64 - exact.len() as i64,
        heuristic_valid,
        heuristic_minimal,
        oracle_valid: is_distinguishing(t, &exact),
    };
    let ok = view.heuristic_valid && view.heuristic_minimal && view.oracle_valid && view.gap >= 0;
    let text = match format {
        Format::Json => json(&view)?,
        _ => {
            let mut s = format!("expression: {}\n", view.expression);
            writeln!(s, "heuristic_size: {}", view.heuristic_size)?;
            writeln!(s, "oracle_size: {}", view.oracle_size)?;
            writeln!(s, "gap: {}", view.gap)?;
            writeln!(s, "heuristic_tests: {:?}", view.heuristic_tests)?;
            writeln!(s, "oracle_tests: {:?}", view.oracle_tests)?;
            writeln!(s, "heuristic_valid: {}", view.heuristic_valid)?;
            writeln!(s, "heuristic_minimal: {}", view.heuristic_minimal)?;
            writeln!(s, "oracle_valid: {}", view.oracle_valid)?;
            s
        }
    };
    Ok((text, ok))
}

pub fn gen(
    ctx: &Ctx,
    seed: u64,
    vars: usize,
    terms: usize,
    min_literals: usize,
    max_literals: usize,
) -> Output {
    ctx.format_or(Format::Text, &[Format::Text])?;
    if vars > ctx.max_vars {
        bail!("--vars {vars} exceeds max-vars {}", ctx.max_vars);
    }
    let params = GenParams {
        vars,
        terms,
        min_literals,
        max_literals,
    };
    let expr = generate(seed, &params).map_err(anyhow::Error::msg)?;
    Ok((format!("{expr}\n"), true))
}

/// Column order of the bench CSV.
pub const BENCH_HEADER: [&str; 8] = [
    "circuit",
    "n",
    "a",
    "faults_raw",
    "fault_classes",
    "b",
    "elapsed_seconds",
    "percentage",
];

pub fn bench(ctx: &Ctx, dir: &Path) -> Output {
    ctx.format_or(Format::Csv, &[Format::Csv])?;
    let mut files: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "sop"));
    files.sort();

    let rows: Vec<Vec<String>> = files
        .par_iter()
        .map(|path| -> Result<Vec<String>> {
            let a = analyze_input(ctx, path.to_str().context("non-UTF-8 path")?)
                .with_context(|| format!("{}", path.display()))?;
            let r = &a.report;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(vec![
                name,
                r.n.to_string(),
                r.a.to_string(),
                r.fault_count_raw.to_string(),
                r.class_count.to_string(),
                r.b.to_string(),
                format!("{:.6}", r.elapsed_seconds),
                format_percentage(r.a, r.b),
            ])
        })
        .collect::<Result<_>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(BENCH_HEADER)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok((String::from_utf8(w.into_inner()?)?, true))
}
