//! Text formats: states as `M sigma mt m re im` lines, matrices as
//! `row col re im` coordinate triples. `#` starts a comment.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::basis::{BasisIndex, Sign};
use crate::error::{Error, Result};
use crate::lattice::matrix::OperatorMatrix;
use crate::lattice::state::LatticeState;

pub fn read_state<R: BufRead>(reader: R) -> Result<LatticeState> {
    let mut state = LatticeState::zero();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected `M sigma mt m re im`, got {} fields", fields.len()),
            });
        }
        let int = |s: &str| {
            s.trim_start_matches('+').parse::<i64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad integer `{s}`: {e}"),
            })
        };
        let real = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad number `{s}`: {e}"),
            })
        };
        let sigma = Sign::from_value(int(fields[1])?).ok_or_else(|| Error::Parse {
            line: lineno,
            msg: format!("sigma must be +1 or -1, got `{}`", fields[1]),
        })?;
        let idx = BasisIndex::new(int(fields[0])?, sigma, int(fields[2])?, int(fields[3])?)
            .map_err(|e| Error::Parse { line: lineno, msg: e.to_string() })?;
        state.add(idx, Complex64::new(real(fields[4])?, real(fields[5])?))?;
    }
    Ok(state)
}

pub fn write_state<W: Write>(state: &LatticeState, mut out: W) -> Result<()> {
    writeln!(out, "# M sigma mt m re im")?;
    for (idx, a) in state.iter() {
        writeln!(
            out,
            "{} {} {} {} {:e} {:e}",
            idx.radial,
            idx.sigma.value(),
            idx.mt,
            idx.m,
            a.re,
            a.im
        )?;
    }
    Ok(())
}

pub fn write_matrix<W: Write>(a: &OperatorMatrix, mut out: W) -> Result<()> {
    writeln!(out, "# window {} dim {} nnz {}", a.window, a.dim(), a.nnz())?;
    writeln!(out, "# row col re im")?;
    let mut entries: Vec<_> = a.triplets().collect();
    entries.sort_by_key(|&(r, c, _)| (r, c));
    for (r, c, v) in entries {
        writeln!(out, "{r} {c} {:e} {:e}", v.re, v.im)?;
    }
    Ok(())
}
