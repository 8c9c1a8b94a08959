use super::lexer::{tokenize, Number, Token};
use super::{BenchProgram, ErrorKind, ParseError, SourceDecl, Span, Statement};
use crate::states::Pol;

const KEYWORDS: [&str; 6] = ["source", "npbs", "qwp", "flip", "ps", "pr"];

fn syntax(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError::new(ErrorKind::Syntax, span, msg)
}

fn semantic(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError::new(ErrorKind::Semantic, span, msg)
}

fn ident(tok: &Token<'_>) -> Result<String, ParseError> {
    let mut chars = tok.text.chars();
    let ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(tok.text.to_string())
    } else {
        Err(syntax(tok.span, format!("expected a path label, found {:?}", tok.text)))
    }
}

fn pol(text: &str, span: Span) -> Result<Pol, ParseError> {
    match text {
        "V" => Ok(Pol::V),
        "H" => Ok(Pol::H),
        other => Err(syntax(span, format!("expected polarization V or H, found {other:?}"))),
    }
}

fn number(tok: &Token<'_>) -> Result<Number, ParseError> {
    tok.text
        .parse()
        .map_err(|msg| ParseError::new(ErrorKind::Lex, tok.span, msg))
}

/// Column just past the last token, for "missing argument" errors.
fn end_span(toks: &[Token<'_>]) -> Span {
    let last = toks.last().expect("keyword present");
    Span {
        line: last.span.line,
        column: last.span.column + last.text.chars().count(),
    }
}

fn expect_args<'a>(toks: &'a [Token<'a>], n: usize, usage: &str) -> Result<&'a [Token<'a>], ParseError> {
    match toks.len() - 1 {
        k if k < n => Err(syntax(
            end_span(toks),
            format!("missing argument; usage: {usage}"),
        )),
        k if k > n => Err(syntax(
            toks[n + 1].span,
            format!("unexpected token {:?}; usage: {usage}", toks[n + 1].text),
        )),
        _ => Ok(&toks[1..]),
    }
}

/// Tracks declared path labels in arm order.
struct Scope {
    paths: Vec<String>,
}

impl Scope {
    fn require(&self, label: &str, span: Span) -> Result<(), ParseError> {
        if self.paths.iter().any(|p| p == label) {
            Ok(())
        } else {
            Err(semantic(span, format!("undeclared path {label:?}")))
        }
    }

    fn introduce(&mut self, label: &str, span: Span) -> Result<(), ParseError> {
        if self.paths.iter().any(|p| p == label) {
            return Ok(());
        }
        if self.paths.len() == 2 {
            return Err(semantic(
                span,
                format!(
                    "path {label:?} would be a third path; only {:?} and {:?} are available",
                    self.paths[0], self.paths[1]
                ),
            ));
        }
        self.paths.push(label.to_string());
        Ok(())
    }
}

pub fn parse(text: &str) -> Result<BenchProgram, ParseError> {
    let mut source: Option<(SourceDecl, Span)> = None;
    let mut scope = Scope { paths: Vec::new() };
    let mut statements = Vec::new();
    let mut line_spans = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let toks = tokenize(line, idx + 1)?;
        let Some(kw) = toks.first() else { continue };
        let span = kw.span;

        if kw.text == "source" {
            let args = expect_args(&toks, 3, "source PATH POL INTENSITY")?;
            if source.is_some() {
                return Err(semantic(span, "duplicate source declaration"));
            }
            let path = ident(&args[0])?;
            let p = pol(args[1].text, args[1].span)?;
            let intensity = number(&args[2])?;
            if intensity.to_f64() < 0.0 {
                return Err(semantic(args[2].span, "source intensity must be non-negative"));
            }
            scope.introduce(&path, args[0].span)?;
            source = Some((
                SourceDecl {
                    path,
                    pol: p,
                    intensity,
                },
                span,
            ));
            continue;
        }

        if !KEYWORDS.contains(&kw.text) {
            return Err(syntax(span, format!("unknown keyword {:?}", kw.text)));
        }
        if source.is_none() {
            return Err(semantic(
                span,
                format!("{:?} before the source declaration", kw.text),
            ));
        }

        let stmt = match kw.text {
            "npbs" => {
                let args = expect_args(&toks, 2, "npbs PATH PATH")?;
                let first = ident(&args[0])?;
                let second = ident(&args[1])?;
                if first == second {
                    return Err(semantic(args[1].span, "beam splitter needs two distinct paths"));
                }
                if scope.require(&first, args[0].span).is_err()
                    && scope.require(&second, args[1].span).is_err()
                {
                    return Err(semantic(
                        args[0].span,
                        format!("beam splitter {first:?}/{second:?} touches no declared path"),
                    ));
                }
                scope.introduce(&first, args[0].span)?;
                scope.introduce(&second, args[1].span)?;
                Statement::Npbs { first, second }
            }
            "qwp" => {
                let args = expect_args(&toks, 2, "qwp PATH fast=POL")?;
                let path = ident(&args[0])?;
                let axis = args[1].text.strip_prefix("fast=").ok_or_else(|| {
                    syntax(args[1].span, format!("expected fast=V or fast=H, found {:?}", args[1].text))
                })?;
                let fast = pol(axis, args[1].span)?;
                scope.require(&path, args[0].span)?;
                Statement::Qwp { path, fast }
            }
            "flip" => {
                let args = expect_args(&toks, 1, "flip PATH")?;
                let path = ident(&args[0])?;
                scope.require(&path, args[0].span)?;
                Statement::Flip { path }
            }
            "ps" | "pr" => {
                let usage = if kw.text == "ps" { "ps PATH ANGLE" } else { "pr PATH ANGLE" };
                let args = expect_args(&toks, 2, usage)?;
                let path = ident(&args[0])?;
                let angle = number(&args[1])?;
                scope.require(&path, args[0].span)?;
                if kw.text == "ps" {
                    Statement::PhaseShift { path, angle }
                } else {
                    Statement::Rotate { path, angle }
                }
            }
            _ => unreachable!("keyword checked above"),
        };
        statements.push(stmt);
        line_spans.push(span);
    }

    let (source, source_span) =
        source.ok_or_else(|| semantic(Span { line: 1, column: 1 }, "missing source declaration"))?;
    Ok(BenchProgram {
        source,
        source_span,
        statements,
        line_spans,
    })
}
