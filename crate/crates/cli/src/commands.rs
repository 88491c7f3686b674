use std::fs;
use std::path::Path;

use dvrp_core::approx::{approx_solve, gamma_for_epsilon, ApproxConfig};
use dvrp_core::binpack::harmonic_pack;
use dvrp_core::decomposition::decompose;
use dvrp_core::exact::solve_bounded;
use dvrp_core::generators::{binpack_to_dvrp, gen_lower_bound, gen_random, DistancePolicy, LowerBoundParams};
use dvrp_core::instance::{serialize_instance_with_comments, TreeInstance};
use dvrp_core::properties::{run_suite, Property};
use dvrp_core::rational::parse_rational;
use dvrp_core::{normalize, parse_instance, serialize_instance, RoutingInstance};

use crate::{
    bench, workers_from_env, BenchArgs, BinpackArgs, Command, DecomposeArgs, ExactArgs, Failure, GenFromBinpackArgs,
    GenLbArgs, GenRandomArgs, InstanceInput, Io, SolveArgs, VerifyArgs,
};

type Outcome = Result<(), Failure>;

pub(crate) fn dispatch(command: Command, io: &mut Io<'_>) -> Outcome {
    match command {
        Command::Solve(a) => solve(a, io),
        Command::Exact(a) => exact(a, io),
        Command::Decompose(a) => decompose_cmd(a, io),
        Command::Verify(a) => verify(a, io),
        Command::Binpack(a) => binpack(a, io),
        Command::GenLb(a) => gen_lb(a, io),
        Command::GenRandom(a) => gen_random_cmd(a, io),
        Command::GenFromBinpack(a) => gen_from_binpack(a, io),
        Command::Bench(a) => bench_cmd(a, io),
    }
}

fn read_text(path: Option<&Path>, io: &mut Io<'_>) -> Result<String, Failure> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io.stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_instance(input: &InstanceInput, io: &mut Io<'_>) -> Result<RoutingInstance, Failure> {
    let text = read_text(input.input.as_deref(), io)?;
    Ok(parse_instance(&text)?)
}

fn solve(a: SolveArgs, io: &mut Io<'_>) -> Outcome {
    let inst = read_instance(&a.instance, io)?;
    let mut cfg = ApproxConfig::new(parse_rational(&a.epsilon)?);
    cfg.gamma_override = a.gamma;
    cfg.materialize_tours = a.tours;
    cfg.workers = workers_from_env()?;
    cfg.state_budget = a.budget;
    let report = approx_solve(&inst, &cfg)?;
    for flag in &report.flags {
        writeln!(io.stderr, "note: {flag}")?;
    }
    writeln!(io.stdout, "total {}", report.total_tours)?;
    if let Some(tours) = &report.tours {
        for tour in tours {
            let ids: Vec<String> = tour.iter().map(u64::to_string).collect();
            writeln!(io.stdout, "tour {}", ids.join(" "))?;
        }
    }
    if let Some(path) = &a.report {
        fs::write(path, report.summary()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn exact(a: ExactArgs, io: &mut Io<'_>) -> Outcome {
    if a.gamma == 0 {
        return Err(Failure::Usage("--gamma must be at least 1".into()));
    }
    let inst = read_instance(&a.instance, io)?;
    let answer = match normalize(&inst) {
        Ok(norm) => solve_bounded(&norm, a.gamma),
        Err(dvrp_core::Error::Infeasible { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    match answer {
        Some(n) => writeln!(io.stdout, "{n}")?,
        None => {
            writeln!(io.stdout, "INFEASIBLE")?;
            return Err(Failure::Infeasible(format!("no solution with at most {} tours", a.gamma)));
        }
    }
    Ok(())
}

fn decompose_cmd(a: DecomposeArgs, io: &mut Io<'_>) -> Outcome {
    let gamma = match (a.gamma, &a.epsilon) {
        (Some(0), _) => return Err(Failure::Usage("--gamma must be at least 1".into())),
        (Some(g), _) => g,
        (None, Some(e)) => gamma_for_epsilon(&parse_rational(e)?)?,
        (None, None) => gamma_for_epsilon(&parse_rational("1/5")?)?,
    };
    let inst = read_instance(&a.instance, io)?;
    let norm = normalize(&inst)?;
    let dec = decompose(&norm, gamma)?;
    for flag in &dec.flags {
        writeln!(io.stderr, "note: {flag}")?;
    }
    for c in &dec.components {
        let exit = c
            .exit
            .map(|x| norm.original_id(x).to_string())
            .unwrap_or_else(|| "-".into());
        writeln!(
            io.stdout,
            "{} {} {} {} {}",
            c.kind.as_str(),
            norm.original_id(c.root),
            exit,
            c.edges.len(),
            if c.is_big { "big" } else { "small" }
        )?;
    }
    Ok(())
}

fn verify(a: VerifyArgs, io: &mut Io<'_>) -> Outcome {
    let property = Property::parse(&a.lemma)?;
    let report = run_suite(property, a.trials, a.seed);
    writeln!(io.stdout, "{report}")?;
    for f in &report.failures {
        writeln!(io.stdout, "counterexample {f}")?;
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "{} of {} trials violated property {}",
            report.failures.len(),
            report.trials,
            property.name()
        )))
    }
}

fn binpack(a: BinpackArgs, io: &mut Io<'_>) -> Outcome {
    let text = read_text(a.input.as_deref(), io)?;
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let item = parse_rational(line).map_err(|e| Failure::Usage(format!("line {}: {e}", i + 1)))?;
        items.push(item);
    }
    let out = harmonic_pack(&items, a.space)?;
    for (i, bin) in out.assignment.iter().enumerate() {
        writeln!(io.stdout, "item {i} bin {bin}")?;
    }
    writeln!(io.stdout, "bins {}", out.state.bins_used())?;
    writeln!(io.stdout, "max-open {}", out.max_open())?;
    Ok(())
}

fn gen_lb(a: GenLbArgs, io: &mut Io<'_>) -> Outcome {
    let params = LowerBoundParams::new(a.k, a.gamma)?;
    let inst = gen_lower_bound(params)?;
    let comments = [format!("gamma {}", a.gamma), format!("k {}", a.k)];
    write!(io.stdout, "{}", serialize_instance_with_comments(&inst, &comments))?;
    Ok(())
}

fn parse_range(text: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::Usage(format!("expected LO..HI, found `{text}`"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn gen_random_cmd(a: GenRandomArgs, io: &mut Io<'_>) -> Outcome {
    let policy = match (a.halves, &a.halves_range) {
        (Some(halves), _) => DistancePolicy::Multiple { halves },
        (None, Some(r)) => {
            let (lo, hi) = parse_range(r)?;
            DistancePolicy::Range { lo, hi }
        }
        (None, None) => DistancePolicy::default(),
    };
    let inst = gen_random(a.seed, a.n, a.max_weight, policy)?;
    write!(io.stdout, "{}", serialize_instance(&inst))?;
    Ok(())
}

fn gen_from_binpack(a: GenFromBinpackArgs, io: &mut Io<'_>) -> Outcome {
    let text = read_text(Some(&a.sizes), io)?;
    let sizes = text
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| Failure::Usage(format!("invalid item size `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let inst = binpack_to_dvrp(a.capacity, &sizes)?;
    write!(io.stdout, "{}", serialize_instance(&inst))?;
    Ok(())
}

fn bench_cmd(a: BenchArgs, io: &mut Io<'_>) -> Outcome {
    let table = bench::run_suite_file(&a.suite, workers_from_env()?)?;
    write!(io.stdout, "{}", table.render(!a.no_time))?;
    Ok(())
}
