use super::{Element, PcGroup};
use crate::error::{Error, Result};

fn word(w: &[u8]) -> String {
    let toks: Vec<String> = w
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(k, e)| format!("g{}^{}", k + 1, e))
        .collect();
    if toks.is_empty() {
        "1".to_string()
    } else {
        toks.join(" ")
    }
}

pub(super) fn write(g: &PcGroup) -> String {
    let mut s = format!("pcgroup p={} n={}\n", g.p, g.n);
    for i in 0..g.n {
        s += &format!("g{}^p = {}\n", i + 1, word(&g.powers[i]));
    }
    for i in 0..g.n {
        for j in 0..i {
            s += &format!("[g{},g{}] = {}\n", i + 1, j + 1, word(&g.comms[i][j]));
        }
    }
    s
}

fn gen_index(tok: &str, n: usize, line: usize) -> Result<usize> {
    let err = |msg: String| Error::Parse { line, msg };
    let num = tok.strip_prefix('g').ok_or_else(|| err(format!("expected generator, got {tok:?}")))?;
    let k: usize = num.parse().map_err(|_| err(format!("bad generator {tok:?}")))?;
    if k == 0 || k > n {
        return Err(err(format!("generator {tok} out of range 1..={n}")));
    }
    Ok(k - 1)
}

fn parse_word(s: &str, p: u32, n: usize, line: usize) -> Result<Element> {
    let mut w = vec![0u8; n];
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(w);
    }
    let mut last: Option<usize> = None;
    for tok in s.split_whitespace() {
        let (g, e) = tok.split_once('^').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected g<k>^<e>, got {tok:?}"),
        })?;
        let k = gen_index(g, n, line)?;
        let e: u32 = e.parse().map_err(|_| Error::Parse { line, msg: format!("bad exponent in {tok:?}") })?;
        if e == 0 || e >= p {
            return Err(Error::Parse { line, msg: format!("exponent in {tok:?} must lie in 1..{p}") });
        }
        if last.is_some_and(|l| k <= l) {
            return Err(Error::Parse { line, msg: "word is not in normal form order".into() });
        }
        last = Some(k);
        w[k] = e as u8;
    }
    Ok(w)
}

pub(super) fn parse(s: &str) -> Result<PcGroup> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let herr = || Error::Parse { line: hline, msg: "expected header `pcgroup p=<p> n=<ngens>`".into() };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "pcgroup" {
        return Err(herr());
    }
    let p: u32 = parts[1].strip_prefix("p=").and_then(|v| v.parse().ok()).ok_or_else(herr)?;
    let n: usize = parts[2].strip_prefix("n=").and_then(|v| v.parse().ok()).ok_or_else(herr)?;
    if n > 64 {
        return Err(Error::Parse { line: hline, msg: "too many generators".into() });
    }
    let mut powers: Vec<Option<Element>> = vec![None; n];
    let mut comms: Vec<Vec<Option<Element>>> = (0..n).map(|i| vec![None; i]).collect();
    for (ln, l) in lines {
        let (lhs, rhs) = l.split_once('=').ok_or(Error::Parse { line: ln, msg: "expected `=`".into() })?;
        let lhs = lhs.trim();
        let w = parse_word(rhs, p, n, ln)?;
        let slot = if let Some(inner) = lhs.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (a, b) = inner.split_once(',').ok_or(Error::Parse { line: ln, msg: "bad commutator".into() })?;
            let i = gen_index(a.trim(), n, ln)?;
            let j = gen_index(b.trim(), n, ln)?;
            if j >= i {
                return Err(Error::Parse { line: ln, msg: "commutator [g_i,g_j] needs i > j".into() });
            }
            &mut comms[i][j]
        } else if let Some(g) = lhs.strip_suffix("^p") {
            let i = gen_index(g, n, ln)?;
            &mut powers[i]
        } else {
            return Err(Error::Parse { line: ln, msg: format!("unrecognized relation {lhs:?}") });
        };
        if slot.is_some() {
            return Err(Error::Parse { line: ln, msg: "duplicate relation".into() });
        }
        *slot = Some(w);
    }
    let powers = powers.into_iter().map(|w| w.unwrap_or_else(|| vec![0; n])).collect();
    let comms = comms
        .into_iter()
        .map(|r| r.into_iter().map(|w| w.unwrap_or_else(|| vec![0; n])).collect())
        .collect();
    PcGroup::new(p, powers, comms)
}
