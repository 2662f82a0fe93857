//! The catalog data file format: the algebra file format extended with
//! `param`, `claim`, `aut`/`autbind` and `note` sections, one block per
//! entry, under the versioned header line `assocalg-catalog v1`.

use std::fmt::Write as _;

use crate::catalog::{CatalogEntry, CatalogError, ClaimedInvariants, ParamSpec};
use crate::exactnum::Scalar;
use crate::morphisms::expr::ParamExpr;
use crate::morphisms::AutFamilyTemplate;

pub const HEADER: &str = "assocalg-catalog v1";

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, l)) if l.trim().is_empty() || l.trim_start().starts_with('#') => continue,
            Some((_, l)) => break l.trim().to_string(),
            None => return Err(CatalogError::Parse("empty catalog file".into())),
        }
    };
    if header != HEADER {
        return Err(CatalogError::Parse(format!(
            "bad header {header:?}, expected {HEADER:?}"
        )));
    }

    let mut entries = Vec::new();
    let mut cur: Option<EntryBuilder> = None;
    for (lineno, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| CatalogError::Parse(format!("line {}: {msg}", lineno + 1));
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "entry" => {
                if cur.is_some() {
                    return Err(err("entry block not closed with `end`".into()));
                }
                if rest.is_empty() {
                    return Err(err("entry needs an id".into()));
                }
                cur = Some(EntryBuilder::new(rest));
            }
            "end" => {
                let b = cur.take().ok_or_else(|| err("`end` outside entry".into()))?;
                entries.push(b.finish().map_err(err)?);
            }
            _ => {
                let b = cur
                    .as_mut()
                    .ok_or_else(|| err(format!("{keyword:?} outside an entry block")))?;
                b.line(keyword, rest).map_err(err)?;
            }
        }
    }
    if cur.is_some() {
        return Err(CatalogError::Parse("unterminated entry block".into()));
    }
    let mut seen = std::collections::BTreeSet::new();
    for e in &entries {
        if !seen.insert(e.id.clone()) {
            return Err(CatalogError::Parse(format!("duplicate entry id {}", e.id)));
        }
    }
    Ok(entries)
}

struct EntryBuilder {
    id: String,
    dim: Option<usize>,
    products: Vec<(usize, usize, usize, ParamExpr)>,
    params: Vec<ParamSpec>,
    commutative: bool,
    unital: bool,
    nilpotent: bool,
    dim_c: Option<usize>,
    dim_l: Option<usize>,
    dim_r: Option<usize>,
    wedderburn: Option<(Vec<usize>, Vec<usize>)>,
    families: Vec<(Vec<ParamExpr>, Vec<Vec<(String, ParamExpr)>>)>,
    notes: Vec<String>,
}

impl EntryBuilder {
    fn new(id: &str) -> Self {
        EntryBuilder {
            id: id.to_string(),
            dim: None,
            products: Vec::new(),
            params: Vec::new(),
            commutative: false,
            unital: false,
            nilpotent: false,
            dim_c: None,
            dim_l: None,
            dim_r: None,
            wedderburn: None,
            families: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn line(&mut self, keyword: &str, rest: &str) -> Result<(), String> {
        match keyword {
            "dim" => {
                self.dim = Some(rest.parse().map_err(|_| "bad dimension".to_string())?);
            }
            "param" => {
                let mut toks = rest.split_whitespace();
                let name = toks.next().ok_or("param needs a name")?.to_string();
                let mut excluded = Vec::new();
                match toks.next() {
                    None => {}
                    Some("excludes") => {
                        for t in toks {
                            excluded
                                .push(t.parse::<Scalar>().map_err(|e| format!("{e}"))?);
                        }
                    }
                    Some(other) => return Err(format!("unexpected token {other:?}")),
                }
                self.params.push(ParamSpec { name, excluded });
            }
            "product" => {
                // i j -> k : expr
                let (lhs, expr_text) = rest.split_once(':').ok_or("product missing `:`")?;
                let (idx_part, target) = lhs.split_once("->").ok_or("product missing `->`")?;
                let mut idx = idx_part.split_whitespace();
                let i: usize = idx
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or("bad left index")?;
                let j: usize = idx
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or("bad right index")?;
                let k: usize = target.trim().parse().map_err(|_| "bad target index")?;
                let coeff =
                    ParamExpr::parse(expr_text.trim()).map_err(|e| format!("{e}"))?;
                self.products.push((i, j, k, coeff));
            }
            "claim" => {
                let mut toks = rest.split_whitespace();
                match toks.next().ok_or("empty claim")? {
                    "commutative" => self.commutative = true,
                    "unital" => self.unital = true,
                    "nilpotent" => self.nilpotent = true,
                    "dimC" => {
                        self.dim_c =
                            Some(toks.next().and_then(|t| t.parse().ok()).ok_or("bad dimC")?)
                    }
                    "dimL" => {
                        self.dim_l =
                            Some(toks.next().and_then(|t| t.parse().ok()).ok_or("bad dimL")?)
                    }
                    "dimR" => {
                        self.dim_r =
                            Some(toks.next().and_then(|t| t.parse().ok()).ok_or("bad dimR")?)
                    }
                    "wedderburn" => {
                        let mut n_span = None;
                        let mut s_span = None;
                        for tok in toks {
                            let (name, vecs) =
                                tok.split_once('=').ok_or("wedderburn needs N=... S=...")?;
                            let idxs = vecs
                                .split(',')
                                .map(|v| {
                                    v.strip_prefix('e')
                                        .and_then(|d| d.parse::<usize>().ok())
                                        .ok_or_else(|| format!("bad basis reference {v:?}"))
                                })
                                .collect::<Result<Vec<_>, _>>()?;
                            match name {
                                "N" => n_span = Some(idxs),
                                "S" => s_span = Some(idxs),
                                _ => return Err(format!("unknown span {name:?}")),
                            }
                        }
                        self.wedderburn = Some((
                            n_span.ok_or("wedderburn missing N")?,
                            s_span.ok_or("wedderburn missing S")?,
                        ));
                    }
                    other => return Err(format!("unknown claim {other:?}")),
                }
            }
            "aut" => {
                let rows: Vec<&str> = rest.split(';').collect();
                let mut cells = Vec::new();
                let width = rows[0].split_whitespace().count();
                if rows.len() != width {
                    return Err(format!(
                        "aut matrix is {}x{width}, expected square",
                        rows.len()
                    ));
                }
                for row in rows {
                    let row_cells: Vec<&str> = row.split_whitespace().collect();
                    if row_cells.len() != width {
                        return Err("ragged aut matrix".into());
                    }
                    for c in row_cells {
                        cells.push(ParamExpr::parse(c).map_err(|e| format!("{e}"))?);
                    }
                }
                self.families.push((cells, Vec::new()));
            }
            "autbind" => {
                let fam = self.families.last_mut().ok_or("autbind before any aut")?;
                let mut set = Vec::new();
                for tok in rest.split_whitespace() {
                    let (name, expr_text) =
                        tok.split_once('=').ok_or("autbind needs name=expr pairs")?;
                    set.push((
                        name.to_string(),
                        ParamExpr::parse(expr_text).map_err(|e| format!("{e}"))?,
                    ));
                }
                fam.1.push(set);
            }
            "note" => self.notes.push(rest.to_string()),
            other => return Err(format!("unknown keyword {other:?}")),
        }
        Ok(())
    }

    fn finish(self) -> Result<CatalogEntry, String> {
        let dim = self.dim.ok_or("entry missing dim")?;
        let dim_c = self.dim_c.ok_or("entry missing dimC claim")?;
        let dim_l = self.dim_l.ok_or("entry missing dimL claim")?;
        let dim_r = self.dim_r.ok_or("entry missing dimR claim")?;
        if self.nilpotent == self.wedderburn.is_some() {
            return Err("entry must claim exactly one of nilpotent / wedderburn".into());
        }
        for &(i, j, k, _) in &self.products {
            for idx in [i, j, k] {
                if idx == 0 || idx > dim {
                    return Err(format!("product index {idx} out of range for dim {dim}"));
                }
            }
        }
        if let Some((n, s)) = &self.wedderburn {
            for idx in n.iter().chain(s) {
                if *idx == 0 || *idx > dim {
                    return Err(format!("wedderburn index e{idx} out of range"));
                }
            }
        }
        let families = self
            .families
            .into_iter()
            .map(|(cells, binds)| {
                let side = (cells.len() as f64).sqrt() as usize;
                if side * side != cells.len() || side != dim {
                    return Err(format!(
                        "aut matrix has {} cells, expected {dim}x{dim}",
                        cells.len()
                    ));
                }
                Ok(AutFamilyTemplate::new(dim, cells).with_binds(binds))
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(CatalogEntry {
            id: self.id,
            dim,
            products: self.products,
            params: self.params,
            claimed: ClaimedInvariants {
                commutative: self.commutative,
                unital: self.unital,
                nilpotent: self.nilpotent,
                dim_c,
                dim_l,
                dim_r,
                wedderburn: self.wedderburn,
            },
            aut_families: families,
            notes: self.notes,
        })
    }
}

pub fn render_catalog(entries: &[CatalogEntry]) -> String {
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    for e in entries {
        writeln!(out).unwrap();
        writeln!(out, "entry {}", e.id).unwrap();
        writeln!(out, "dim {}", e.dim).unwrap();
        for p in &e.params {
            if p.excluded.is_empty() {
                writeln!(out, "param {}", p.name).unwrap();
            } else {
                let ex: Vec<String> = p.excluded.iter().map(|s| s.to_string()).collect();
                writeln!(out, "param {} excludes {}", p.name, ex.join(" ")).unwrap();
            }
        }
        for (i, j, k, c) in &e.products {
            writeln!(out, "product {i} {j} -> {k} : {c}").unwrap();
        }
        if e.claimed.commutative {
            writeln!(out, "claim commutative").unwrap();
        }
        if e.claimed.unital {
            writeln!(out, "claim unital").unwrap();
        }
        if e.claimed.nilpotent {
            writeln!(out, "claim nilpotent").unwrap();
        }
        writeln!(out, "claim dimC {}", e.claimed.dim_c).unwrap();
        writeln!(out, "claim dimL {}", e.claimed.dim_l).unwrap();
        writeln!(out, "claim dimR {}", e.claimed.dim_r).unwrap();
        if let Some((n, s)) = &e.claimed.wedderburn {
            let fmt_span = |v: &[usize]| {
                v.iter()
                    .map(|i| format!("e{i}"))
                    .collect::<Vec<_>>()
                    .join(",")
            };
            writeln!(out, "claim wedderburn N={} S={}", fmt_span(n), fmt_span(s)).unwrap();
        }
        for fam in &e.aut_families {
            let n = fam.dim();
            let rows: Vec<String> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| fam.entries()[i * n + j].to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            writeln!(out, "aut {}", rows.join(" ; ")).unwrap();
            for bind in fam.binds() {
                let set: Vec<String> = bind.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "autbind {}", set.join(" ")).unwrap();
            }
        }
        for note in &e.notes {
            writeln!(out, "note {note}").unwrap();
        }
        writeln!(out, "end").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
assocalg-catalog v1

entry As_2_1
dim 2
product 1 1 -> 2 : 1
claim commutative
claim nilpotent
claim dimC 2
claim dimL 1
claim dimR 1
aut a 0 ; b a^2
end

entry Toy
dim 2
param alpha excludes 1
product 1 2 -> 2 : alpha
claim dimC 1
claim dimL 1
claim dimR 0
claim wedderburn N=e2 S=e1
aut 1 0 ; a b
autbind a=0
note just a parser exercise
end
";

    #[test]
    fn parse_and_render_round_trip() {
        let entries = parse_catalog(SAMPLE).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].id, "As_2_1");
        assert!(entries[0].claimed.nilpotent);
        assert_eq!(entries[1].params[0].name, "alpha");
        assert_eq!(entries[1].params[0].excluded, vec![Scalar::one()]);
        assert_eq!(
            entries[1].claimed.wedderburn,
            Some((vec![2], vec![1]))
        );
        assert_eq!(entries[1].aut_families[0].binds().len(), 1);
        let rendered = render_catalog(&entries);
        let back = parse_catalog(&rendered).unwrap();
        assert_eq!(entries, back);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_catalog("nonsense v1").is_err());
        let missing_claims = "assocalg-catalog v1\nentry X\ndim 2\nclaim nilpotent\nend\n";
        assert!(parse_catalog(missing_claims).is_err());
        let both = "assocalg-catalog v1\nentry X\ndim 1\nclaim nilpotent\n\
                    claim wedderburn N=e1 S=e1\nclaim dimC 1\nclaim dimL 1\nclaim dimR 1\nend\n";
        assert!(parse_catalog(both).is_err());
        let dup = format!("{SAMPLE}\nentry As_2_1\ndim 2\nclaim nilpotent\nclaim dimC 1\nclaim dimL 1\nclaim dimR 1\nend\n");
        assert!(parse_catalog(&dup).is_err());
    }
}
