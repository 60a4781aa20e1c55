//! The bundled reproduction workflows: the incidence-code study of the
//! Blokhuis-Haemers design (`example13`) and the per-involution
//! orbit-matrix study with the Table-style summary (`example14`).

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use qsc_core::design::{
    intersection_profile, verify_design, write_inc, DesignParams, IncidenceStructure,
};
use qsc_core::error::Error;
use qsc_core::f2code::{analyze, code_from_incidence, CodeReport, Optimality};
use qsc_core::orbit::{
    block_graph, dedup_by_fixed_structure, find_involutions, nonfixed_code, orbit_matrix,
    quotient_matrix, verify_eq8, verify_om, verify_quotient, Axis, InvolutionFind, QsDesignInfo,
    SemilinearMap,
};
use qsc_core::Result;

use crate::util::{enum_guard, write_json, RunManifest};

#[derive(Serialize)]
pub struct Example13Report {
    pub design: DesignParams,
    pub intersection_numbers: Vec<usize>,
    pub incidence_code: CodeReport,
    pub transpose_code: TransposeReport,
}

/// The point-by-block code can exceed the enumeration guard at q=8;
/// flags that need only the generator matrix are always present.
#[derive(Serialize)]
pub struct TransposeReport {
    pub length: usize,
    pub dimension: usize,
    pub self_orthogonal: bool,
    pub analysis: Option<CodeReport>,
}

pub fn example13(q: u16, dir: Option<&Path>) -> Result<Example13Report> {
    let design = qsc_core::design::blokhuis_haemers(q)?;
    let params = verify_design(&design, 2)?;
    let profile = intersection_profile(&design)?;
    println!(
        "design: 2-({},{},{}) with b={} r={} intersection numbers {:?}",
        params.v, params.k, params.lambda, params.b, params.r, profile.numbers
    );

    let guard = enum_guard();
    let code = code_from_incidence(&design, false);
    let report = analyze(&code, guard)?;
    println!(
        "block-by-point code: [{},{},{}] self_orthogonal={} doubly_even={:?} optimality={:?}",
        report.length,
        report.dimension,
        report.min_distance,
        report.self_orthogonal,
        report.doubly_even,
        report.optimality
    );
    let expected_dims = [12usize, 13];
    if q == 4 {
        if !expected_dims.contains(&report.dimension) {
            return Err(Error::TheoremCheck(format!(
                "incidence code dimension {} not in {{12, 13}}",
                report.dimension
            )));
        }
        if report.min_distance != 24
            || report.doubly_even != Some(true)
            || !report.self_orthogonal
        {
            return Err(Error::TheoremCheck(
                "incidence code is not a doubly even self-orthogonal [64,*,24] code".into(),
            ));
        }
    } else if !report.self_orthogonal || report.doubly_even == Some(false) {
        return Err(Error::TheoremCheck(
            "incidence code must be doubly even and self-orthogonal".into(),
        ));
    }

    let tcode = code_from_incidence(&design, true);
    let t_analysis = if tcode.k() <= guard {
        Some(analyze(&tcode, guard)?)
    } else {
        None
    };
    let transpose = TransposeReport {
        length: tcode.n(),
        dimension: tcode.k(),
        self_orthogonal: tcode.is_self_orthogonal(),
        analysis: t_analysis,
    };
    match &transpose.analysis {
        Some(a) => println!(
            "point-by-block code: [{},{},{}] self_orthogonal={} doubly_even={:?} singly_even={:?}",
            a.length, a.dimension, a.min_distance, a.self_orthogonal, a.doubly_even, a.singly_even
        ),
        None => println!(
            "point-by-block code: [{},{}] self_orthogonal={} (dimension above enumeration guard {guard})",
            transpose.length, transpose.dimension, transpose.self_orthogonal
        ),
    }
    if !transpose.self_orthogonal {
        return Err(Error::TheoremCheck(
            "point-by-block code is not self-orthogonal".into(),
        ));
    }
    if q == 4 {
        let a = transpose.analysis.as_ref().expect("dimension 12 is enumerable");
        // r = 126 = 2 mod 4 forces a singly even code at q=4
        if a.doubly_even != Some(false) || a.singly_even != Some(true) {
            return Err(Error::TheoremCheck(
                "point-by-block code at q=4 must be singly even, not doubly even".into(),
            ));
        }
    }

    let out = Example13Report {
        design: params,
        intersection_numbers: profile.numbers,
        incidence_code: report,
        transpose_code: transpose,
    };
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.display().to_string(),
            source: e,
        })?;
        let inc_path = dir.join(format!("bh{q}.inc"));
        write_inc(&design, &inc_path)?;
        write_json(&dir.join("example13.json"), &out)?;
        println!("wrote {} and example13.json", inc_path.display());
    }
    Ok(out)
}

#[derive(Serialize)]
pub struct OrbitCodeReport {
    pub ambient_length: usize,
    pub effective_length: usize,
    pub dropped_coords: Vec<usize>,
    pub hypothesis_notes: Vec<String>,
    pub report: CodeReport,
}

#[derive(Serialize)]
pub struct EquationSummary {
    pub om_pass: bool,
    pub quotient_pass: bool,
    pub eq8_pass: bool,
    pub om_violations: usize,
    pub quotient_violations: usize,
    pub eq8_violations: usize,
}

#[derive(Serialize)]
pub struct InvolutionReport {
    pub index: usize,
    pub f: usize,
    pub h: usize,
    pub map: SemilinearMap,
    pub point_orbits: usize,
    pub block_orbits: usize,
    pub equations: EquationSummary,
    pub column_code: OrbitCodeReport,
    pub row_code: OrbitCodeReport,
}

#[derive(Serialize)]
pub struct SummaryRow {
    pub fixed_points: usize,
    pub fixed_blocks: usize,
    pub involutions: usize,
    pub column_code_parameters: Vec<CodeLine>,
}

#[derive(Serialize, PartialEq, Eq, PartialOrd, Ord, Clone)]
pub struct CodeLine {
    pub parameters: String,
    pub self_orthogonal: bool,
    pub doubly_even: bool,
    pub two_weight: bool,
    pub optimality: Optimality,
}

#[derive(Serialize)]
pub struct Example14Summary {
    pub design: DesignParams,
    pub intersection_numbers: (usize, usize),
    pub block_graph: qsc_core::srg::SrgParams,
    pub involutions: usize,
    pub equation_violations: usize,
    pub rows: Vec<SummaryRow>,
}

struct PerInvolution {
    report: InvolutionReport,
    all_pass: bool,
}

fn analyze_involution(
    index: usize,
    inv: &InvolutionFind,
    design: &IncidenceStructure,
    params: &DesignParams,
    info: &QsDesignInfo,
    graph: &qsc_core::srg::Graph,
    srg: &qsc_core::srg::SrgParams,
    guard: usize,
) -> Result<PerInvolution> {
    let om = orbit_matrix(design, std::slice::from_ref(&inv.action))?;
    let om_report = verify_om(&om, params)?;
    let qm = quotient_matrix(graph, om.block_orbits.as_ref().expect("computed from action"))?;
    let q_report = verify_quotient(&qm, srg);
    let eq8 = verify_eq8(&om, &qm, info.x, info.y, info.params.k);
    let col = nonfixed_code(&om, Axis::Columns, 2, true, Some(info))?;
    let row = nonfixed_code(&om, Axis::Rows, 2, true, Some(info))?;
    let col_report = analyze(&col.code, guard)?;
    let row_report = analyze(&row.code, guard)?;
    let om_violations = om_report.bound_violations.len()
        + om_report.row_sum_violations.len()
        + om_report.col_sum_violations.len()
        + om_report.quadratic_violations.len();
    let quotient_violations = q_report.bound_violations.len()
        + q_report.row_sum_violations.len()
        + q_report.weighted_sum_violations.len()
        + q_report.quadratic_violations.len();
    let equations = EquationSummary {
        om_pass: om_report.all_pass(),
        quotient_pass: q_report.all_pass(),
        eq8_pass: eq8.all_pass(),
        om_violations,
        quotient_violations,
        eq8_violations: eq8.violations.len(),
    };
    let all_pass = equations.om_pass && equations.quotient_pass && equations.eq8_pass;
    Ok(PerInvolution {
        report: InvolutionReport {
            index,
            f: inv.fixed.f,
            h: inv.fixed.h,
            map: inv.map.clone(),
            point_orbits: om.m(),
            block_orbits: om.n(),
            equations,
            column_code: OrbitCodeReport {
                ambient_length: col.ambient_len,
                effective_length: col.effective_len,
                dropped_coords: col.dropped_coords,
                hypothesis_notes: col.hypothesis_notes,
                report: col_report,
            },
            row_code: OrbitCodeReport {
                ambient_length: row.ambient_len,
                effective_length: row.effective_len,
                dropped_coords: row.dropped_coords,
                hypothesis_notes: row.hypothesis_notes,
                report: row_report,
            },
        },
        all_pass,
    })
}

#[cfg(feature = "parallel")]
fn run_all<T: Send, R: Send>(items: Vec<T>, f: impl Fn(T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all<T, R>(items: Vec<T>, f: impl Fn(T) -> R) -> Vec<R> {
    items.into_iter().map(f).collect()
}

pub fn example14(inc_path: &Path, report_dir: &Path, dedup: bool) -> Result<Example14Summary> {
    let design = qsc_core::design::read_inc(inc_path)?;
    let params = verify_design(&design, 2)?;
    let profile = intersection_profile(&design)?;
    let Some((x, y)) = profile.qs_pair else {
        return Err(Error::NotQuasiSymmetric(profile.numbers));
    };
    let info = QsDesignInfo { params, x, y };
    let q = match design.v() {
        64 => 4u16,
        512 => 8,
        v => {
            return Err(Error::UnsupportedParameter(format!(
                "v={v} is not q^3 for q in {{4, 8}}"
            )))
        }
    };
    let bg = block_graph(&design, y)?;
    let Some(srg) = bg.srg else {
        return Err(Error::NotStronglyRegular(
            "block graph failed the strong-regularity check".into(),
        ));
    };
    println!(
        "block graph: SRG({},{},{},{}) connected={}",
        srg.v, srg.k, srg.lambda, srg.mu, bg.connected
    );

    let found = find_involutions(q, &design)?;
    println!("involutions preserving the design: {}", found.len());
    let selected: Vec<(usize, InvolutionFind)> = if dedup {
        dedup_by_fixed_structure(&found)
            .into_iter()
            .cloned()
            .enumerate()
            .collect()
    } else {
        found.into_iter().enumerate().collect()
    };

    std::fs::create_dir_all(report_dir).map_err(|e| Error::Io {
        path: report_dir.display().to_string(),
        source: e,
    })?;
    let guard = enum_guard();
    let results: Vec<Result<PerInvolution>> = run_all(selected, |(index, inv)| {
        analyze_involution(index, &inv, &design, &params, &info, &bg.graph, &srg, guard)
    });

    let mut manifest = RunManifest::new();
    manifest.record_input(inc_path)?;
    let mut violations = 0usize;
    let mut by_sig: BTreeMap<(usize, usize), (usize, Vec<CodeLine>)> = BTreeMap::new();
    for result in results {
        let per = result?;
        let rep = &per.report;
        if !per.all_pass {
            violations += rep.equations.om_violations
                + rep.equations.quotient_violations
                + rep.equations.eq8_violations;
        }
        let entry = by_sig.entry((rep.f, rep.h)).or_default();
        entry.0 += 1;
        let c = &rep.column_code.report;
        let line = CodeLine {
            parameters: format!("[{},{},{}]", c.length, c.dimension, c.min_distance),
            self_orthogonal: c.self_orthogonal,
            doubly_even: c.doubly_even == Some(true),
            two_weight: c.two_weight,
            optimality: c.optimality,
        };
        if !entry.1.contains(&line) {
            entry.1.push(line);
        }
        let path = report_dir.join(format!("inv_{:04}_f{}_h{}.json", rep.index, rep.f, rep.h));
        write_json(&path, rep)?;
        manifest.record_output(&path);
    }

    let rows: Vec<SummaryRow> = by_sig
        .into_iter()
        .map(|((f, h), (count, mut codes))| {
            codes.sort();
            SummaryRow {
                fixed_points: f,
                fixed_blocks: h,
                involutions: count,
                column_code_parameters: codes,
            }
        })
        .collect();
    println!("fixed_points  fixed_blocks  involutions  column_code  self-orthogonal  doubly_even  two_weight  optimal");
    for row in &rows {
        for code in &row.column_code_parameters {
            println!(
                "{:<12}  {:<12}  {:<11}  {:<11}  {:<15}  {:<11}  {:<10}  {:?}",
                row.fixed_points,
                row.fixed_blocks,
                row.involutions,
                code.parameters,
                if code.self_orthogonal { "yes" } else { "no" },
                if code.doubly_even { "yes" } else { "no" },
                if code.two_weight { "yes" } else { "no" },
                code.optimality
            );
        }
    }
    println!("equation violations: {violations}");

    let summary = Example14Summary {
        design: params,
        intersection_numbers: (x, y),
        block_graph: srg,
        involutions: rows.iter().map(|r| r.involutions).sum(),
        equation_violations: violations,
        rows,
    };
    let summary_path = report_dir.join("summary.json");
    write_json(&summary_path, &summary)?;
    manifest.record_output(&summary_path);
    manifest.write(&report_dir.join("manifest.json"))?;
    if violations > 0 {
        return Err(Error::TheoremCheck(format!(
            "{violations} orbit-matrix equation violations"
        )));
    }
    Ok(summary)
}
