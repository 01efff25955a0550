//! The line-oriented presentation DSL.
//!
//! ```text
//! vertices 1 2 3
//! arrow a : 1 -> 2
//! arrow b : 2 -> 3
//! zero a b            # a then b is zero
//! equal p q , - r s   # p q = -(r s)
//! nilpotent 6
//! connector ahat : a  # name the connector of the maximal path `a`
//! ```
//!
//! Paths are written in application order. Statements end at a newline or `;`.

use super::{AlgebraPresentation, PathWord, PresentationError, Quiver, RelationGen};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Arrow,
    Colon,
    Comma,
    Minus,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, reason: impl Into<String>) -> PresentationError {
    PresentationError::Syntax {
        line,
        col,
        reason: reason.into(),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '.' | '@' | '+' | '*')
}

/// Split one source line into statements of tokens.
fn tokenize_line(text: &str, line: usize) -> Result<Vec<Vec<Spanned>>, PresentationError> {
    let chars: Vec<char> = text.chars().collect();
    let mut stmts = vec![Vec::new()];
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let push = |stmts: &mut Vec<Vec<Spanned>>, tok| {
            stmts.last_mut().unwrap().push(Spanned { tok, line, col })
        };
        match c {
            '#' => break,
            ';' => {
                stmts.push(Vec::new());
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            ':' => {
                push(&mut stmts, Tok::Colon);
                i += 1;
            }
            ',' => {
                push(&mut stmts, Tok::Comma);
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(&mut stmts, Tok::Arrow);
                i += 2;
            }
            '-' if !chars.get(i + 1).is_some_and(|&n| is_ident_char(n)) => {
                push(&mut stmts, Tok::Minus);
                i += 1;
            }
            c if is_ident_char(c) || c == '-' => {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (is_ident_char(chars[i])
                        || (chars[i] == '-' && chars.get(i + 1) != Some(&'>')))
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                push(&mut stmts, Tok::Ident(word));
            }
            other => return Err(syntax(line, col, format!("unexpected character `{other}`"))),
        }
    }
    stmts.retain(|s| !s.is_empty());
    Ok(stmts)
}

struct Builder {
    quiver: Quiver,
    relations: Vec<RelationGen>,
    nilpotency: Option<usize>,
    named: Vec<(String, PathWord)>,
}

impl Builder {
    fn ident<'a>(&self, t: Option<&'a Spanned>, what: &str, at: (usize, usize)) -> Result<(&'a str, usize, usize), PresentationError> {
        match t {
            Some(Spanned {
                tok: Tok::Ident(s),
                line,
                col,
            }) => Ok((s.as_str(), *line, *col)),
            Some(s) => Err(syntax(s.line, s.col, format!("expected {what}"))),
            None => Err(syntax(at.0, at.1, format!("expected {what}"))),
        }
    }

    fn expect(&self, t: Option<&Spanned>, tok: Tok, what: &str, at: (usize, usize)) -> Result<(), PresentationError> {
        match t {
            Some(s) if s.tok == tok => Ok(()),
            Some(s) => Err(syntax(s.line, s.col, format!("expected {what}"))),
            None => Err(syntax(at.0, at.1, format!("expected {what}"))),
        }
    }

    fn vertex(&self, name: &str, line: usize, col: usize) -> Result<usize, PresentationError> {
        self.quiver
            .vertex(name)
            .ok_or_else(|| syntax(line, col, format!("unknown vertex `{name}`")))
    }

    /// A path from a run of identifiers; `e_<v>` denotes a trivial path.
    fn path(&self, toks: &[Spanned], at: (usize, usize)) -> Result<PathWord, PresentationError> {
        if toks.is_empty() {
            return Err(syntax(at.0, at.1, "expected a path"));
        }
        let mut arrows = Vec::new();
        for (k, t) in toks.iter().enumerate() {
            let (name, line, col) = self.ident(Some(t), "an arrow name", at)?;
            if let Some(a) = self.quiver.arrow_by_name(name) {
                arrows.push((a, line, col));
            } else if let Some(v) = name.strip_prefix("e_").and_then(|v| self.quiver.vertex(v)) {
                if toks.len() != 1 || k != 0 {
                    return Err(syntax(line, col, "an idempotent must stand alone"));
                }
                return Ok(PathWord::trivial(v));
            } else {
                return Err(syntax(line, col, format!("unknown arrow `{name}`")));
            }
        }
        for w in arrows.windows(2) {
            let (a, _, _) = w[0];
            let (b, line, col) = w[1];
            if self.quiver.arrow(a).target != self.quiver.arrow(b).source {
                return Err(syntax(
                    line,
                    col,
                    format!(
                        "arrows `{}` and `{}` do not compose",
                        self.quiver.arrow(a).name,
                        self.quiver.arrow(b).name
                    ),
                ));
            }
        }
        Ok(PathWord {
            start: self.quiver.arrow(arrows[0].0).source,
            arrows: arrows.into_iter().map(|x| x.0).collect(),
        })
    }

    fn statement(&mut self, st: &[Spanned]) -> Result<(), PresentationError> {
        let (kw, line, col) = self.ident(st.first(), "a keyword", (0, 0))?;
        let end = st.last().map(|s| (s.line, s.col + 1)).unwrap();
        let rest = &st[1..];
        match kw {
            "vertices" => {
                if rest.is_empty() {
                    return Err(syntax(line, col, "expected at least one vertex"));
                }
                for t in rest {
                    let (name, l, c) = self.ident(Some(t), "a vertex name", end)?;
                    self.quiver
                        .add_vertex(name)
                        .map_err(|_| syntax(l, c, format!("duplicate vertex `{name}`")))?;
                }
            }
            "arrow" => {
                let (name, l, c) = self.ident(rest.first(), "an arrow name", end)?;
                self.expect(rest.get(1), Tok::Colon, "`:`", end)?;
                let (s, sl, sc) = self.ident(rest.get(2), "a source vertex", end)?;
                self.expect(rest.get(3), Tok::Arrow, "`->`", end)?;
                let (t, tl, tc) = self.ident(rest.get(4), "a target vertex", end)?;
                if let Some(extra) = rest.get(5) {
                    return Err(syntax(extra.line, extra.col, "unexpected token"));
                }
                let s = self.vertex(s, sl, sc)?;
                let t = self.vertex(t, tl, tc)?;
                self.quiver
                    .add_arrow(name, s, t)
                    .map_err(|_| syntax(l, c, format!("duplicate arrow `{name}`")))?;
            }
            "zero" => {
                let p = self.path(rest, end)?;
                if p.is_trivial() {
                    return Err(syntax(line, col, "a zero relation needs at least one arrow"));
                }
                self.relations.push(RelationGen::Monomial(p));
            }
            "equal" => {
                let split = rest
                    .iter()
                    .position(|t| t.tok == Tok::Comma)
                    .ok_or_else(|| syntax(end.0, end.1, "expected `,` between the two sides"))?;
                let lhs = self.path(&rest[..split], (rest[split].line, rest[split].col))?;
                let mut rhs_toks = &rest[split + 1..];
                let mut sign = 1;
                if rhs_toks.first().is_some_and(|t| t.tok == Tok::Minus) {
                    sign = -1;
                    rhs_toks = &rhs_toks[1..];
                }
                let rhs = self.path(rhs_toks, end)?;
                if lhs == rhs
                    || lhs.source() != rhs.source()
                    || lhs.target(&self.quiver) != rhs.target(&self.quiver)
                {
                    return Err(syntax(line, col, "the two sides must be distinct parallel paths"));
                }
                self.relations.push(RelationGen::Binomial { lhs, rhs, sign });
            }
            "nilpotent" => {
                let (n, l, c) = self.ident(rest.first(), "a positive integer", end)?;
                let n: usize = n
                    .parse()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| syntax(l, c, "expected a positive integer"))?;
                if let Some(extra) = rest.get(1) {
                    return Err(syntax(extra.line, extra.col, "unexpected token"));
                }
                self.nilpotency = Some(n);
            }
            "connector" => {
                let (name, _, _) = self.ident(rest.first(), "a connector name", end)?;
                self.expect(rest.get(1), Tok::Colon, "`:`", end)?;
                let p = self.path(&rest[2.min(rest.len())..], end)?;
                self.named.push((name.to_string(), p));
            }
            other => return Err(syntax(line, col, format!("unknown statement `{other}`"))),
        }
        Ok(())
    }
}

pub fn parse_presentation(text: &str) -> Result<AlgebraPresentation, PresentationError> {
    let mut b = Builder {
        quiver: Quiver::new(),
        relations: Vec::new(),
        nilpotency: None,
        named: Vec::new(),
    };
    for (i, line) in text.lines().enumerate() {
        for st in tokenize_line(line, i + 1)? {
            b.statement(&st)?;
        }
    }
    if b.quiver.vertex_count() == 0 {
        return Err(syntax(1, 1, "no vertices declared"));
    }
    AlgebraPresentation::new(b.quiver, b.relations, b.nilpotency)?.with_named_paths(b.named)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# sample
vertices 1 2 3 4
arrow t : 2 -> 1
arrow a : 3 -> 2; arrow b : 4 -> 2
arrow l : 4 -> 4
zero a t
zero l l
nilpotent 6
connector qhat : l b t
";

    #[test]
    fn parses_and_roundtrips() {
        let p = parse_presentation(SAMPLE).unwrap();
        assert_eq!(p.quiver().vertex_count(), 4);
        assert_eq!(p.quiver().arrow_count(), 4);
        assert_eq!(p.relations().len(), 2);
        assert_eq!(p.named_paths()[0].0, "qhat");
        let printed = p.to_string();
        let again = parse_presentation(&printed).unwrap();
        assert_eq!(p, again);
        assert_eq!(printed, again.to_string());
    }

    #[test]
    fn negative_degree_names() {
        let p = parse_presentation("vertices 1_-1 1_0\narrow a_-1 : 1_-1 -> 1_0\n").unwrap();
        assert_eq!(p.quiver().vertex_name(0), "1_-1");
        assert_eq!(p.quiver().arrow(0).name, "a_-1");
    }

    #[test]
    fn signed_binomial() {
        let p = parse_presentation(
            "vertices 1 2 3 4\narrow a : 1 -> 2\narrow b : 2 -> 4\narrow c : 1 -> 3\narrow d : 3 -> 4\nequal a b , - c d\n",
        )
        .unwrap();
        assert_eq!(p.binomials().next().unwrap().2, -1);
        assert_eq!(parse_presentation(&p.to_string()).unwrap(), p);
    }

    fn err_pos(text: &str) -> (usize, usize) {
        match parse_presentation(text) {
            Err(PresentationError::Syntax { line, col, .. }) => (line, col),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(err_pos("vertices 1 2\narrow a : 1 -> 3\n"), (2, 16));
        assert_eq!(err_pos("vertices 1 2\narrow a : 1 -> 2\nzero a a\n"), (3, 8));
        assert_eq!(err_pos("vertices 1\nfoo\n"), (2, 1));
        assert_eq!(err_pos("vertices 1 1\n"), (1, 12));
        assert_eq!(err_pos("vertices 1\nnilpotent x\n"), (2, 11));
        assert_eq!(err_pos("vertices 1 2\narrow a 1 -> 2\n"), (2, 9));
    }

    #[test]
    fn cycle_without_bound_is_rejected() {
        assert_eq!(
            parse_presentation("vertices 1\narrow l : 1 -> 1\nzero l l\n"),
            Err(PresentationError::MissingNilpotency)
        );
    }
}
