// SPDX-License-Identifier: Apache-2.0

//! Text dumps of machines and traces.
//!
//! ```text
//! machine cell:3 { regs=[_,num:1]; prog=LOAD 0;CALL 0; tape=[cell:1] }
//! ```
//!
//! A dump lists the root first, then every cell it transitively references
//! in ascending id order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::exec::{walk, RunOutcome, RunResult};
use super::machine::{fmt_regs, fmt_tape, Address, Instruction, Machine, Program};
use super::table::AddressTable;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DumpError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("dump contains no machine")]
    Empty,
    #[error("reference to {0}, which the dump does not define")]
    Dangling(Address),
    #[error("machine {0} is invalid")]
    Invalid(Address),
}

fn block(addr: Address, m: &Machine) -> String {
    format!(
        "machine {addr} {{ regs={}; prog={}; tape={} }}",
        fmt_regs(m.registers()),
        m.program(),
        fmt_tape(m.tape())
    )
}

fn references(m: &Machine) -> impl Iterator<Item = Address> + '_ {
    m.registers().iter().flatten().chain(m.tape()).copied()
}

/// Renders `root` and the cells it reaches.
pub fn dump(table: &AddressTable, root: Address) -> String {
    let mut seen = BTreeSet::new();
    let mut todo = vec![root];
    while let Some(a) = todo.pop() {
        for r in references(&table.lookup(a)) {
            if let Address::Cell(id) = r {
                if seen.insert(id) {
                    todo.push(r);
                }
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "{}", block(root, &table.lookup(root)));
    for id in seen {
        let a = Address::Cell(id);
        if a != root {
            let _ = writeln!(out, "{}", block(a, &table.lookup(a)));
        }
    }
    out
}

struct Entry {
    line: usize,
    addr: Address,
    regs: Vec<Option<Address>>,
    prog: Vec<Instruction>,
    tape: Vec<Address>,
}

fn syntax(line: usize, message: impl Into<String>) -> DumpError {
    DumpError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_list<T>(line: usize, s: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, DumpError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(line, format!("expected a bracketed list, found '{s}'")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|x| item(x.trim()).ok_or_else(|| syntax(line, format!("bad list item '{x}'"))))
        .collect()
}

fn parse_instr(s: &str) -> Option<Instruction> {
    let mut words = s.split_whitespace();
    let op = words.next()?;
    let args: Vec<u32> = words.map(str::parse).collect::<Result<_, _>>().ok()?;
    Some(match (op, args.as_slice()) {
        ("LOAD", [i]) => Instruction::Load(*i),
        ("APP", [i, j, k]) => Instruction::App(*i, *j, *k),
        ("TEST", [i, j, k, l]) => Instruction::Test(*i, *j, *k, *l),
        ("PRED", [i, j]) => Instruction::Pred(*i, *j),
        ("SUCC", [i, j]) => Instruction::Succ(*i, *j),
        ("CALL", [i]) => Instruction::Call(*i),
        _ => return None,
    })
}

fn parse_entry(line: usize, text: &str) -> Result<Entry, DumpError> {
    let rest = text
        .strip_prefix("machine ")
        .ok_or_else(|| syntax(line, "expected 'machine'"))?;
    let (addr, body) = rest.split_once('{').ok_or_else(|| syntax(line, "expected '{'"))?;
    let addr: Address = addr.trim().parse().map_err(|e| syntax(line, format!("{e}")))?;
    let body = body
        .trim_end()
        .strip_suffix('}')
        .ok_or_else(|| syntax(line, "expected '}'"))?;
    let field = |body: &str, name: &str| -> Result<(usize, usize), DumpError> {
        let key = format!("{name}=");
        body.find(&key)
            .map(|p| (p, p + key.len()))
            .ok_or_else(|| syntax(line, format!("missing field '{name}'")))
    };
    let (_, regs_at) = field(body, "regs")?;
    let (prog_key, prog_at) = field(body, "prog")?;
    let (tape_key, tape_at) = field(body, "tape")?;
    if !(regs_at <= prog_key && prog_at <= tape_key) {
        return Err(syntax(line, "fields must appear as regs, prog, tape"));
    }
    let field_text = |s: &str| s.trim().trim_end_matches(';').trim().to_string();
    let regs_text = field_text(&body[regs_at..prog_key]);
    let prog_text = field_text(&body[prog_at..tape_key]);
    let tape_text = field_text(&body[tape_at..]);
    let regs = parse_list(line, &regs_text, |x| match x {
        "_" => Some(None),
        x => x.parse().ok().map(Some),
    })?;
    let prog = if prog_text == "-" {
        Vec::new()
    } else {
        prog_text
            .split(';')
            .map(|i| parse_instr(i).ok_or_else(|| syntax(line, format!("bad instruction '{i}'"))))
            .collect::<Result<_, _>>()?
    };
    let tape = parse_list(line, &tape_text, |x| x.parse().ok())?;
    Ok(Entry {
        line,
        addr,
        regs,
        prog,
        tape,
    })
}

/// Loads a dump into `table`, returning the root's address there. Cell ids
/// of the dump are remapped to the ids this table assigns.
pub fn load_dump(table: &mut AddressTable, text: &str) -> Result<Address, DumpError> {
    let mut entries = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        entries.push(parse_entry(k + 1, line)?);
    }
    let (root, rest) = entries.split_first().ok_or(DumpError::Empty)?;
    let mut cells: BTreeMap<u32, &Entry> = BTreeMap::new();
    for e in rest {
        match e.addr {
            Address::Cell(id) if e.addr != root.addr => {
                if cells.insert(id, e).is_some() {
                    return Err(syntax(e.line, format!("{} defined twice", e.addr)));
                }
            }
            _ => return Err(syntax(e.line, format!("unexpected entry for {}", e.addr))),
        }
    }
    let mut remap: BTreeMap<u32, Address> = BTreeMap::new();
    let build = |e: &Entry, remap: &BTreeMap<u32, Address>| -> Result<Machine, DumpError> {
        let map = |a: Address| match a {
            Address::Cell(id) => remap.get(&id).copied().ok_or(DumpError::Dangling(a)),
            other => Ok(other),
        };
        let regs = e
            .regs
            .iter()
            .map(|r| r.map(map).transpose())
            .collect::<Result<_, _>>()?;
        let tape = e.tape.iter().map(|&a| map(a)).collect::<Result<_, _>>()?;
        Machine::new(regs, Program::new(&e.prog), tape).map_err(|_| DumpError::Invalid(e.addr))
    };
    for (&id, e) in &cells {
        let m = build(e, &remap)?;
        let a = table.intern(m);
        remap.insert(id, a);
    }
    let m = build(root, &remap)?;
    Ok(table.intern(m))
}

/// `step <k> | <instr or FINAL/ERR> | regs=[...] | tape=[...]`
pub fn trace_line(k: u64, label: &str, m: &Machine) -> String {
    format!(
        "step {k} | {label} | regs={} | tape={}",
        fmt_regs(m.registers()),
        fmt_tape(m.tape())
    )
}

/// Runs `m`, returning one trace line per visited state.
pub fn trace(table: &mut AddressTable, m: &Machine, fuel: u64) -> (Vec<String>, RunResult) {
    let mut states: Vec<Machine> = Vec::new();
    let result = walk(table, m, fuel, |_, _, s| {
        states.push(s.clone());
        std::ops::ControlFlow::Continue(())
    });
    let last = states.len() - 1;
    let lines = states
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let label = match (&result.outcome, k == last) {
                (RunOutcome::Final(_), true) => "FINAL".to_string(),
                (RunOutcome::Err, true) => "ERR".to_string(),
                _ => s
                    .program()
                    .head()
                    .map_or_else(|| "FINAL".to_string(), |i| i.to_string()),
            };
            trace_line(k as u64, &label, s)
        })
        .collect();
    (lines, result)
}
