//! SDPA sparse format (`.dat-s`) reader and writer.
//!
//! The file describes `max ⟨F_0, Y⟩  s.t.  ⟨F_i, Y⟩ = c_i, Y ⪰ 0`, which maps
//! onto a [`ConicProgram`] over the vectorized `Y` with rows `vec(F_i)`,
//! `b = c`, and cost `−vec(F_0)`. Negative block sizes denote diagonal
//! (nonnegative orthant) blocks.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::cones::ConeSpec;
use crate::conic::{ConicProgram, GramBlock, RowData, VarLayout};
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Numeric tokens of a header line; parsing stops at the first token that is
/// not a number, so trailing comments are ignored.
fn numbers(line: &str) -> Vec<f64> {
    line.replace([',', '{', '}', '(', ')'], " ")
        .split_whitespace()
        .map_while(|t| t.parse::<f64>().ok())
        .collect()
}

fn as_index(v: f64, line: usize, what: &str) -> Result<usize> {
    if v.fract() != 0.0 || v < 0.0 {
        return Err(perr(line, format!("{what} must be a nonnegative integer, got {v}")));
    }
    Ok(v as usize)
}

pub fn parse_sdpa(text: &str) -> Result<ConicProgram> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .skip_while(|(_, l)| l.starts_with('"') || l.starts_with('*'));

    let mut header = |what: &str| -> Result<(usize, Vec<f64>)> {
        let (no, l) = lines
            .next()
            .ok_or_else(|| perr(0, format!("missing {what}")))?;
        Ok((no, numbers(l)))
    };

    let (no, toks) = header("number of constraints")?;
    let m = as_index(*toks.first().ok_or_else(|| perr(no, "bad constraint count"))?, no, "m")?;
    let (no, toks) = header("number of blocks")?;
    let nblocks = as_index(*toks.first().ok_or_else(|| perr(no, "bad block count"))?, no, "nblocks")?;
    if nblocks == 0 {
        return Err(perr(no, "at least one block is required"));
    }

    let mut sizes: Vec<i64> = Vec::with_capacity(nblocks);
    while sizes.len() < nblocks {
        let (no, toks) = header("block structure")?;
        if toks.is_empty() {
            return Err(perr(no, "bad block structure"));
        }
        for t in toks.into_iter().take(nblocks - sizes.len()) {
            if t.fract() != 0.0 || t == 0.0 {
                return Err(perr(no, format!("bad block size {t}")));
            }
            sizes.push(t as i64);
        }
    }
    let mut rhs: Vec<f64> = Vec::with_capacity(m);
    while rhs.len() < m {
        let (no, toks) = header("objective vector")?;
        if toks.is_empty() {
            return Err(perr(no, "bad objective vector"));
        }
        rhs.extend(toks.into_iter().take(m - rhs.len()));
    }

    let cones: Vec<ConeSpec> = sizes
        .iter()
        .map(|&s| {
            if s > 0 {
                ConeSpec::Psd(s as usize)
            } else {
                ConeSpec::NonNeg((-s) as usize)
            }
        })
        .collect();
    let mut offsets = Vec::with_capacity(nblocks);
    let mut total = 0;
    for c in &cones {
        offsets.push(total);
        total += c.len();
    }

    let mut row_pairs: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    let mut cost = vec![0.0; total];
    let mut seen = HashSet::new();
    for (no, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 5 {
            return Err(perr(no, "entry lines need `matno blkno i j value`"));
        }
        let ints = toks[..4]
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| perr(no, format!("bad index '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        let value: f64 = toks[4]
            .parse()
            .map_err(|_| perr(no, format!("bad value '{}'", toks[4])))?;
        let (mat, blk) = (ints[0], ints[1]);
        let (mut i, mut j) = (ints[2], ints[3]);
        if mat > m {
            return Err(perr(no, format!("matrix number {mat} exceeds {m}")));
        }
        if blk == 0 || blk > nblocks {
            return Err(perr(no, format!("block number {blk} out of range")));
        }
        let cone = cones[blk - 1];
        let side = cone.dim();
        if i == 0 || j == 0 || i > side || j > side {
            return Err(perr(no, format!("index ({i},{j}) outside block {blk} of size {side}")));
        }
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        if matches!(cone, ConeSpec::NonNeg(_)) && i != j {
            return Err(perr(no, format!("off-diagonal entry in diagonal block {blk}")));
        }
        if !seen.insert((mat, blk, i, j)) {
            return Err(perr(no, format!("duplicate entry ({mat},{blk},{i},{j})")));
        }
        if value == 0.0 {
            continue;
        }
        let off = offsets[blk - 1];
        let positions: Vec<usize> = match cone {
            ConeSpec::NonNeg(_) => vec![off + i - 1],
            _ if i == j => vec![off + (j - 1) * side + (i - 1)],
            _ => vec![
                off + (j - 1) * side + (i - 1),
                off + (i - 1) * side + (j - 1),
            ],
        };
        for p in positions {
            if mat == 0 {
                cost[p] = -value;
            } else {
                row_pairs[mat - 1].push((p, value));
            }
        }
    }

    let rows: Vec<RowData> = row_pairs.into_iter().map(RowData::from_pairs).collect();
    if let Some(i) = rows.iter().position(RowData::is_empty) {
        return Err(perr(0, format!("constraint {} has no entries", i + 1)));
    }
    let grams = cones
        .iter()
        .zip(&offsets)
        .filter_map(|(c, &offset)| match c {
            ConeSpec::Psd(side) => Some(GramBlock {
                offset,
                side: *side,
                rows: 0..m,
            }),
            _ => None,
        })
        .collect();
    let prog = ConicProgram {
        num_vars: total,
        rows,
        b: rhs,
        c: cost,
        cones,
        layout: VarLayout {
            params: 0..0,
            grams,
        },
    };
    prog.validate()?;
    Ok(prog)
}

/// Writes a program over PSD and nonnegative blocks in SDPA sparse format.
///
/// Rows and cost must be symmetric on every PSD block; free and
/// second-order blocks have no SDPA counterpart.
pub fn write_sdpa(prog: &ConicProgram) -> Result<String> {
    let mut blocks = Vec::with_capacity(prog.cones.len());
    let mut offset = 0;
    for c in &prog.cones {
        match c {
            ConeSpec::Psd(_) | ConeSpec::NonNeg(_) => blocks.push((offset, *c)),
            other => return Err(Error::UnsupportedCone(format!("{other:?} in SDPA output"))),
        }
        offset += c.len();
    }
    let locate = |p: usize| -> (usize, usize, usize, ConeSpec) {
        let k = blocks.partition_point(|&(off, _)| off <= p) - 1;
        let (off, cone) = blocks[k];
        let local = p - off;
        match cone {
            ConeSpec::Psd(side) => (k, local % side, local / side, cone),
            _ => (k, local, local, cone),
        }
    };

    let mut out = String::new();
    let _ = writeln!(out, "{}", prog.num_rows());
    let _ = writeln!(out, "{}", blocks.len());
    let sizes: Vec<String> = blocks
        .iter()
        .map(|(_, c)| match c {
            ConeSpec::Psd(n) => n.to_string(),
            c => format!("-{}", c.dim()),
        })
        .collect();
    let _ = writeln!(out, "{}", sizes.join(" "));
    let rhs: Vec<String> = prog.b.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(out, "{}", rhs.join(" "));

    let mut emit = |mat: usize, dense: &dyn Fn(usize) -> f64, support: &[usize]| -> Result<()> {
        for &p in support {
            let (k, r, c, cone) = locate(p);
            if r > c {
                continue;
            }
            let v = dense(p);
            if let ConeSpec::Psd(side) = cone {
                if r != c {
                    let mirror = blocks[k].0 + r * side + c;
                    if dense(mirror) != v {
                        return Err(Error::MalformedProgram(format!(
                            "matrix {mat} is not symmetric in block {}",
                            k + 1
                        )));
                    }
                }
            }
            let _ = writeln!(out, "{} {} {} {} {}", mat, k + 1, r + 1, c + 1, v);
        }
        Ok(())
    };

    let cost_support: Vec<usize> = (0..prog.num_vars).filter(|&j| prog.c[j] != 0.0).collect();
    emit(0, &|p| -prog.c[p], &cost_support)?;
    for (i, row) in prog.rows.iter().enumerate() {
        let lookup = |p: usize| match row.indices.binary_search(&p) {
            Ok(k) => row.values[k],
            Err(_) => 0.0,
        };
        emit(i + 1, &lookup, &row.indices)?;
    }
    Ok(out)
}
