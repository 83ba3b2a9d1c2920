use std::io::Write;

use serde_json::{json, Value};

use nsmacro::boxes::ConstraintReport;
use nsmacro::figures::{curve_figure, default_m_values, figure_csv};
use nsmacro::ic::GridSpec;
use nsmacro::montecarlo::{chsh_estimate, mc_trace, sample_macro};
use nsmacro::report::{mc_trace_csv, num, trace_csv};
use nsmacro::{
    chsh, classify, decompose_ns, fig6_grid, ic_necessary, is_local, is_no_signaling, macro_box,
    macro_chsh_trace, ClassifyOptions, VotingRule, EPS_PROB, FACETS,
};

use crate::args::{Cli, Command, Format};
use crate::error::CliError;
use crate::source::{parse_m, parse_source, Source};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = match &cli.command {
        Command::Figure { id } => figure(cli, *id)?,
        cmd => {
            let src = source(cli)?;
            match cmd {
                Command::Validate => return validate(cli, &src),
                Command::Chsh => chsh_cmd(cli, &src)?,
                Command::Membership => membership(cli, &src)?,
                Command::Macro => macro_cmd(cli, &src)?,
                Command::Trace => trace(cli, &src)?,
                Command::Mc => mc(cli, &src)?,
                Command::Ic => ic(cli, &src)?,
                Command::Classify => classify_cmd(cli, &src)?,
                Command::Figure { .. } => unreachable!(),
            }
        }
    };
    emit(cli, &text)
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn source(cli: &Cli) -> Result<Source, CliError> {
    let spec = cli
        .source
        .as_deref()
        .ok_or_else(|| CliError::Usage("this command needs --box".into()))?;
    parse_source(spec)
}

fn rule(cli: &Cli) -> Result<VotingRule, CliError> {
    Ok(cli.rule.parse::<VotingRule>()?)
}

fn m_values(cli: &Cli) -> Result<Vec<usize>, CliError> {
    let spec = cli
        .m
        .as_deref()
        .ok_or_else(|| CliError::Usage("this command needs --M".into()))?;
    parse_m(spec)
}

fn single_m(cli: &Cli) -> Result<usize, CliError> {
    match m_values(cli)?[..] {
        [m] => Ok(m),
        _ => Err(CliError::Usage("this command takes a single --M".into())),
    }
}

fn format(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn validate(cli: &Cli, src: &Source) -> Result<(), CliError> {
    let report = ConstraintReport::of(src.table());
    let verdict = src.validated();
    let text = match format(cli, Format::Json) {
        Format::Json => pretty(&json!({
            "valid": verdict.is_ok(),
            "error": verdict.as_ref().err().map(|e| e.to_string()),
            "worst_range": report.range.0,
            "worst_normalization": report.normalization.0,
            "worst_signaling": report.signaling.0,
        })),
        Format::Csv => format!(
            "valid,worst_range,worst_normalization,worst_signaling\n{},{},{},{}\n",
            verdict.is_ok(),
            num(report.range.0),
            num(report.normalization.0),
            num(report.signaling.0)
        ),
    };
    emit(cli, &text)?;
    verdict.map(|_| ())
}

fn chsh_cmd(cli: &Cli, src: &Source) -> Result<String, CliError> {
    let r = chsh(&src.validated()?);
    Ok(match format(cli, Format::Json) {
        Format::Json => pretty(&r),
        Format::Csv => {
            let mut s = String::from("facet,x_flip,y_flip,out_flip,value\n");
            for f in FACETS {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    f.index,
                    f.x_flip,
                    f.y_flip,
                    f.out_flip,
                    num(r.symmetrized_values[f.index])
                ));
            }
            s
        }
    })
}

fn membership(cli: &Cli, src: &Source) -> Result<String, CliError> {
    let ns = is_no_signaling(src.table(), EPS_PROB)?;
    let b = src.validated()?;
    let local = is_local(&b, EPS_PROB)?;
    let dec = decompose_ns(&b)?;
    Ok(match format(cli, Format::Json) {
        Format::Json => pretty(&json!({
            "no_signaling": ns,
            "local": local,
            "ns_decomposition": dec,
        })),
        Format::Csv => format!(
            "set,member,violation\nno_signaling,{},\nlocal,{},{}\n",
            ns.in_set,
            local.in_set,
            local.certificate.violation.map(num).unwrap_or_default()
        ),
    })
}

fn macro_cmd(cli: &Cli, src: &Source) -> Result<String, CliError> {
    let mb = macro_box(&src.validated()?, single_m(cli)?, rule(cli)?)?;
    Ok(match format(cli, Format::Json) {
        Format::Json => {
            let mut s = mb.boxed.to_json_pretty();
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("setting,P00,P01,P10,P11\n");
            for (label, row) in nsmacro::boxes::SETTING_LABELS.iter().zip(mb.boxed.table()) {
                s.push_str(label);
                for v in row {
                    s.push(',');
                    s.push_str(&num(*v));
                }
                s.push('\n');
            }
            s
        }
    })
}

fn trace(cli: &Cli, src: &Source) -> Result<String, CliError> {
    let points = macro_chsh_trace(&src.validated()?, &m_values(cli)?, rule(cli)?)?;
    Ok(match format(cli, Format::Csv) {
        Format::Csv => trace_csv(&points),
        Format::Json => pretty(&points),
    })
}

fn mc(cli: &Cli, src: &Source) -> Result<String, CliError> {
    let b = src.validated()?;
    let ms = m_values(cli)?;
    let r = rule(cli)?;
    Ok(match format(cli, Format::Csv) {
        Format::Csv => mc_trace_csv(&mc_trace(&b, &ms, r, cli.trials, cli.seed)?),
        Format::Json => {
            let mut out: Vec<Value> = Vec::new();
            for &m in &ms {
                let est = sample_macro(&b, m, r, cli.trials, cli.seed)?;
                let (i, se) = chsh_estimate(&est);
                out.push(json!({ "estimate": est, "chsh": i, "chsh_stderr": se }));
            }
            pretty(&out)
        }
    })
}

fn ic(cli: &Cli, src: &Source) -> Result<String, CliError> {
    let r = ic_necessary(&src.validated()?);
    Ok(match format(cli, Format::Json) {
        Format::Json => pretty(&r),
        Format::Csv => format!(
            "q1,q2,e1,e2,lhs,satisfied,lhs_relabel_max\n{},{},{},{},{},{},{}\n",
            num(r.q1),
            num(r.q2),
            num(r.e1),
            num(r.e2),
            num(r.lhs),
            r.satisfied,
            num(r.lhs_relabel_max)
        ),
    })
}

fn figure(cli: &Cli, id: u8) -> Result<String, CliError> {
    let ms = match cli.m {
        Some(_) => m_values(cli)?,
        None => default_m_values(),
    };
    Ok(match (format(cli, Format::Csv), id) {
        (Format::Csv, _) => figure_csv(id, &ms)?,
        (Format::Json, 6) => pretty(&fig6_grid(GridSpec::default())?),
        (Format::Json, _) => {
            let d = curve_figure(id, &ms)?;
            pretty(&json!({
                "id": d.id,
                "labels": d.labels,
                "M": d.m_values,
                "values": d.values,
            }))
        }
    })
}

fn classify_cmd(cli: &Cli, src: &Source) -> Result<String, CliError> {
    let mut opts = ClassifyOptions {
        rule: rule(cli)?,
        ..Default::default()
    };
    if cli.m.is_some() {
        opts.m_values = m_values(cli)?;
    }
    let r = classify(&src.validated()?, &opts)?;
    Ok(match format(cli, Format::Json) {
        Format::Json => pretty(&r),
        Format::Csv => format!(
            "no_signaling,local,violation,within_tsirelson,ic_satisfied,ic_lhs,limit,final_chsh\n{},{},{},{},{},{},{:?},{}\n",
            r.no_signaling,
            r.local,
            num(r.violation),
            r.within_tsirelson,
            r.ic.satisfied,
            num(r.ic.lhs),
            r.limit.label,
            num(r.limit.final_value)
        ),
    })
}
