//! Row generators for the CSV commands.

use std::io::Write;

use entrev_core::amplitudes::{amplitude_state, quasimode_populations};
use entrev_core::entanglement::{
    concurrence_atom_reservoir_closed, concurrence_atoms_closed, concurrence_cross_pair,
    concurrence_reservoirs_closed, i_concurrence, multipartite_concurrence,
};
use entrev_core::states::{build_joint_state, Partition, Qubit};
use entrev_core::PhysicalParams;

use crate::args::{GridArgs, Table};
use crate::CliError;

pub const EVOLVE_HEADER: [&str; 8] = [
    "tau", "wt", "c1_sq", "c2_sq", "C_a1a2", "C_r1r2", "C_a1r1", "C_a1r2",
];
pub const PARTITIONS_HEADER: [&str; 7] = ["tau", "I", "II", "III", "IV", "V", "VI"];
pub const QUASIMODE_HEADER: [&str; 4] = ["tau", "pa", "pm", "pr"];

/// Uniform grid in `tau = lambda t`, endpoints included.
fn taus(grid: &GridArgs) -> impl Iterator<Item = f64> + '_ {
    let last = grid.samples - 1;
    (0..grid.samples).map(move |k| {
        if k == last {
            grid.tau_max
        } else {
            grid.tau_max * k as f64 / last as f64
        }
    })
}

fn evolve_row(p: &PhysicalParams, tau: f64) -> entrev_core::Result<Vec<f64>> {
    let t = tau / p.lambda();
    let s = amplitude_state(p, t)?;
    Ok(vec![
        tau,
        t * p.w(),
        s.c1.norm_sqr(),
        s.c2 * s.c2,
        concurrence_atoms_closed(p, t)?.value,
        concurrence_reservoirs_closed(p, t)?.value,
        concurrence_atom_reservoir_closed(p, t)?.value,
        concurrence_cross_pair(p, t)?.value,
    ])
}

/// Bipartitions I, II, III, V, VI as the side containing `a1`
/// (or `r1` for VI).
fn labelled_partitions() -> entrev_core::Result<[Partition; 5]> {
    use Qubit::*;
    Ok([
        Partition::new(&[A1, R1])?,
        Partition::new(&[A1])?,
        Partition::new(&[A1, R2])?,
        Partition::new(&[A1, A2])?,
        Partition::new(&[R1])?,
    ])
}

fn partitions_row(
    p: &PhysicalParams,
    parts: &[Partition; 5],
    tau: f64,
) -> entrev_core::Result<Vec<f64>> {
    let state = build_joint_state(p, tau / p.lambda())?;
    let c = |i: usize| i_concurrence(&state, &parts[i]).value;
    Ok(vec![
        tau,
        c(0),
        c(1),
        c(2),
        multipartite_concurrence(&state).value,
        c(3),
        c(4),
    ])
}

fn quasimode_row(p: &PhysicalParams, tau: f64) -> entrev_core::Result<Vec<f64>> {
    let q = quasimode_populations(p, tau / p.lambda())?;
    Ok(vec![tau, q.pa, q.pm, q.pr])
}

/// Fixed scientific notation with 12 significant digits.
fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

/// Writes the table as CSV with an LF line terminator.
///
/// Every row is computed before anything is written, so a domain error
/// leaves the output untouched.
pub fn write_table(
    table: Table,
    params: &PhysicalParams,
    grid: &GridArgs,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (header, rows): (&[&str], Vec<Vec<f64>>) = match table {
        Table::Evolve => (
            &EVOLVE_HEADER,
            taus(grid)
                .map(|tau| evolve_row(params, tau))
                .collect::<entrev_core::Result<_>>()?,
        ),
        Table::Partitions => {
            let parts = labelled_partitions()?;
            (
                &PARTITIONS_HEADER,
                taus(grid)
                    .map(|tau| partitions_row(params, &parts, tau))
                    .collect::<entrev_core::Result<_>>()?,
            )
        }
        Table::Quasimode => (
            &QUASIMODE_HEADER,
            taus(grid)
                .map(|tau| quasimode_row(params, tau))
                .collect::<entrev_core::Result<_>>()?,
        ),
    };

    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().map(format_value))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(tau_max: f64, samples: u64) -> GridArgs {
        GridArgs { tau_max, samples }
    }

    #[test]
    fn grid_hits_both_endpoints() {
        let g = grid(50.0, 7);
        let t: Vec<f64> = taus(&g).collect();
        assert_eq!(t.len(), 7);
        assert_eq!((t[0], t[6]), (0.0, 50.0));
    }

    #[test]
    fn value_format() {
        assert_eq!(format_value(0.6), "6.00000000000e-1");
        assert_eq!(format_value(0.0), "0.00000000000e0");
        assert_eq!(format_value(-1.25e-7), "-1.25000000000e-7");
    }

    #[test]
    fn evolve_table_layout() {
        let p = PhysicalParams::from_ratio(0.1, 1.0 / 10f64.sqrt()).unwrap();
        let mut buf = Vec::new();
        write_table(Table::Evolve, &p, &grid(10.0, 3), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "tau,wt,c1_sq,c2_sq,C_a1a2,C_r1r2,C_a1r1,C_a1r2");
        assert_eq!(lines.len(), 4);
        assert!(!text.contains('\r'));
        assert!(lines[1].starts_with(
            "0.00000000000e0,0.00000000000e0,1.00000000000e0,0.00000000000e0,6.00000000000e-1,"
        ));
    }
}
