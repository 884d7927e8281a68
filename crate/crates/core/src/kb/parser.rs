use std::collections::HashMap;

use super::lexer::{error_at, tokenize, Tok, Token};
use super::{AfStatement, AmStatement, KbDocument, ParseError, SortDecl, Span, Spanned};
use crate::am::ElementKind;
use crate::em::{IntegrityConstraint, ProbabilisticFormula};
use crate::language::{Atom, Formula, Inequality, Literal, ModelTag, Role, Rule, Term, World};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Em,
    Ic,
    Am,
    Af,
    Sorts,
    Universe,
}

struct Parser<'s> {
    source: &'s str,
    tokens: Vec<Token>,
    pos: usize,
    arities: HashMap<(ModelTag, String), usize>,
}

type PResult<T> = Result<T, ParseError>;

impl<'s> Parser<'s> {
    fn new(source: &'s str) -> PResult<Self> {
        Ok(Parser {
            source,
            tokens: tokenize(source)?,
            pos: 0,
            arities: HashMap::new(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    fn span(&self) -> Span {
        match self.tokens.get(self.pos) {
            Some(t) => t.span,
            None => self.end_span(),
        }
    }

    fn end_span(&self) -> Span {
        let line = self.source.lines().count().max(1);
        let column = self.source.lines().last().map_or(0, |l| l.chars().count()) + 1;
        if self.source.ends_with('\n') {
            Span {
                line: line + 1,
                column: 1,
            }
        } else {
            Span { line, column }
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn error(&self, span: Span, message: impl Into<String>) -> ParseError {
        error_at(self.source, span, message)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".into(),
        };
        self.error(self.span(), format!("expected {expected}, found {found}"))
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<Span> {
        let span = self.span();
        if self.eat(tok) {
            Ok(span)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// An identifier or a bare number, used for constants and terms.
    fn symbol(&mut self, what: &str) -> PResult<(String, Span)> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Ident(s)) | Some(Tok::Number(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, span))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == word)
            && self.peek_at(1) != Some(&Tok::LParen)
    }

    fn atom(&mut self, tag: ModelTag) -> PResult<Atom> {
        let (predicate, span) = self.ident("an atom")?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                let (name, _) = self.symbol("a term")?;
                args.push(Term::from_symbol(&name));
                if self.eat(&Tok::Comma) {
                    continue;
                }
                self.expect(&Tok::RParen)?;
                break;
            }
        }
        let key = (tag, predicate.clone());
        match self.arities.get(&key) {
            Some(&n) if n != args.len() => {
                return Err(self.error(
                    span,
                    format!(
                        "predicate {predicate} used with {} arguments, earlier with {n}",
                        args.len()
                    ),
                ))
            }
            Some(_) => {}
            None => {
                self.arities.insert(key, args.len());
            }
        }
        Ok(Atom::new(tag, predicate, args))
    }

    fn ground_atom(&mut self, tag: ModelTag) -> PResult<Atom> {
        let span = self.span();
        let a = self.atom(tag)?;
        if !a.is_ground() {
            return Err(self.error(span, format!("atom {a} must be ground")));
        }
        Ok(a)
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.conjunction()?];
        while matches!(self.peek(), Some(Tok::Ident(s)) if s == "v") {
            self.pos += 1;
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Caret) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().expect("one part")
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(&Tok::RParen)?;
            return Ok(f);
        }
        if self.is_keyword("true") {
            self.pos += 1;
            return Ok(Formula::Top);
        }
        if self.is_keyword("false") {
            self.pos += 1;
            return Ok(Formula::Bottom);
        }
        if !matches!(self.peek(), Some(Tok::Ident(_))) {
            return Err(self.unexpected("a formula"));
        }
        Ok(Formula::atom(self.atom(ModelTag::Em)?))
    }

    fn literal(&mut self) -> PResult<Literal> {
        let negated = if self.is_keyword("neg") || self.peek() == Some(&Tok::Tilde) {
            self.pos += 1;
            true
        } else {
            false
        };
        let atom = self.atom(ModelTag::Am)?;
        Ok(Literal { atom, negated })
    }

    fn rational(&mut self) -> PResult<Rational> {
        let span = self.span();
        let mut text = match self.bump().map(|t| t.tok) {
            Some(Tok::Number(n)) => n,
            _ => {
                self.pos -= 1;
                return Err(self.unexpected("a number"));
            }
        };
        if self.eat(&Tok::Slash) {
            match self.bump().map(|t| t.tok) {
                Some(Tok::Number(d)) => {
                    text.push('/');
                    text.push_str(&d);
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("a denominator"));
                }
            }
        }
        parse_rational(&text).ok_or_else(|| self.error(span, format!("invalid number {text}")))
    }

    /// `: p +- e`, validated.
    fn probability(&mut self, formula: Formula, span: Span) -> PResult<ProbabilisticFormula> {
        self.expect(&Tok::Colon)?;
        let p = self.rational()?;
        self.expect(&Tok::PlusMinus)?;
        let e = self.rational()?;
        ProbabilisticFormula::new(formula, p, e).map_err(|err| self.error(span, err.to_string()))
    }

    fn require_ground(&self, f: &Formula, span: Span) -> PResult<()> {
        if f.is_ground() {
            Ok(())
        } else {
            Err(self.error(span, format!("formula {f} must be ground")))
        }
    }

    fn em_statement(&mut self) -> PResult<Spanned<ProbabilisticFormula>> {
        let span = self.span();
        let f = self.formula()?;
        self.require_ground(&f, span)?;
        let pf = self.probability(f, span)?;
        self.expect(&Tok::Dot)?;
        Ok(Spanned::new(pf, span))
    }

    fn ic_statement(&mut self) -> PResult<Spanned<IntegrityConstraint>> {
        let span = self.span();
        let (kw, _) = self.ident("`oneOf`")?;
        if kw != "oneOf" {
            return Err(self.error(span, format!("expected `oneOf`, found `{kw}`")));
        }
        self.expect(&Tok::LBrace)?;
        let mut atoms = Vec::new();
        loop {
            atoms.push(self.ground_atom(ModelTag::Em)?);
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(&Tok::RBrace)?;
            break;
        }
        self.expect(&Tok::Dot)?;
        let ic = IntegrityConstraint::one_of(atoms).map_err(|e| self.error(span, e.to_string()))?;
        Ok(Spanned::new(ic, span))
    }

    fn body(&mut self) -> PResult<(Vec<Literal>, Vec<Inequality>)> {
        let mut body = Vec::new();
        let mut guards = Vec::new();
        loop {
            let is_guard = matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Number(_)))
                && self.peek_at(1) == Some(&Tok::NotEqual);
            if is_guard {
                let (l, _) = self.symbol("a term")?;
                self.expect(&Tok::NotEqual)?;
                let (r, _) = self.symbol("a term")?;
                guards.push(Inequality(Term::from_symbol(&l), Term::from_symbol(&r)));
            } else {
                body.push(self.literal()?);
            }
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok((body, guards))
    }

    fn am_statement(&mut self) -> PResult<Spanned<AmStatement>> {
        let span = self.span();
        let (label, _) = self.ident("a label")?;
        self.expect(&Tok::Colon)?;
        let (kind, rule) = if self.is_keyword("fact") {
            self.pos += 1;
            (ElementKind::Fact, Rule::fact(self.literal()?))
        } else if self.is_keyword("presume") {
            self.pos += 1;
            (ElementKind::Presumption, Rule::fact(self.literal()?))
        } else {
            let head = self.literal()?;
            let kind = if self.eat(&Tok::StrictArrow) {
                ElementKind::StrictRule
            } else if self.eat(&Tok::DefeasibleArrow) {
                ElementKind::DefeasibleRule
            } else {
                return Err(self.unexpected("`<-` or `-<`"));
            };
            let (body, guards) = self.body()?;
            (kind, Rule { head, body, guards })
        };
        self.expect(&Tok::Dot)?;
        Ok(Spanned::new(AmStatement { label, kind, rule }, span))
    }

    fn af_statement(&mut self) -> PResult<Spanned<AfStatement>> {
        let span = self.span();
        let (label, _) = self.ident("a label")?;
        self.expect(&Tok::Colon)?;
        let fspan = self.span();
        let formula = self.formula()?;
        self.require_ground(&formula, fspan)?;
        self.expect(&Tok::Dot)?;
        Ok(Spanned::new(AfStatement { label, formula }, span))
    }

    fn sort_statement(&mut self) -> PResult<Spanned<SortDecl>> {
        let span = self.span();
        let (kw, _) = self.ident("`actor`, `operation` or `constant`")?;
        let role = match kw.as_str() {
            "actor" => Role::Actor,
            "operation" => Role::Operation,
            "constant" => Role::Plain,
            other => {
                return Err(self.error(
                    span,
                    format!("expected `actor`, `operation` or `constant`, found `{other}`"),
                ))
            }
        };
        let mut names = Vec::new();
        loop {
            let (name, nspan) = self.symbol("a constant")?;
            if matches!(Term::from_symbol(&name), Term::Var(_)) {
                return Err(self.error(nspan, format!("constant {name} must not start uppercase")));
            }
            names.push(name);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::Dot)?;
        Ok(Spanned::new(SortDecl { role, names }, span))
    }

    fn universe_statement(&mut self) -> PResult<Vec<Spanned<Atom>>> {
        let mut atoms = Vec::new();
        loop {
            let span = self.span();
            atoms.push(Spanned::new(self.ground_atom(ModelTag::Em)?, span));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::Dot)?;
        Ok(atoms)
    }

    fn document(&mut self) -> PResult<KbDocument> {
        let mut doc = KbDocument::default();
        let mut section: Option<Section> = None;
        while !self.at_end() {
            if let Some(Tok::Section(name)) = self.peek() {
                let span = self.span();
                section = Some(match name.as_str() {
                    "em" => Section::Em,
                    "ic" => Section::Ic,
                    "am" => Section::Am,
                    "af" => Section::Af,
                    "sorts" => Section::Sorts,
                    "universe" => Section::Universe,
                    other => return Err(self.error(span, format!("unknown section `#{other}`"))),
                });
                if section == Some(Section::Universe) && doc.universe.is_none() {
                    doc.universe = Some(Vec::new());
                }
                self.pos += 1;
                continue;
            }
            match section {
                None => return Err(self.unexpected("a section header such as `#em`")),
                Some(Section::Em) => doc.em.push(self.em_statement()?),
                Some(Section::Ic) => doc.ic.push(self.ic_statement()?),
                Some(Section::Am) => doc.am.push(self.am_statement()?),
                Some(Section::Af) => doc.af.push(self.af_statement()?),
                Some(Section::Sorts) => doc.sorts.push(self.sort_statement()?),
                Some(Section::Universe) => {
                    let atoms = self.universe_statement()?;
                    doc.universe.get_or_insert_with(Vec::new).extend(atoms);
                }
            }
        }
        self.check_labels(&doc)?;
        Ok(doc)
    }

    fn check_labels(&self, doc: &KbDocument) -> PResult<()> {
        let mut seen: HashMap<&str, Span> = HashMap::new();
        for s in &doc.am {
            if let Some(first) = seen.insert(&s.value.label, s.span) {
                return Err(self.error(
                    s.span,
                    format!(
                        "duplicate label {} (first defined at {}:{})",
                        s.value.label, first.line, first.column
                    ),
                ));
            }
        }
        let mut annotated: HashMap<&str, Span> = HashMap::new();
        for a in &doc.af {
            if !seen.contains_key(a.value.label.as_str()) {
                return Err(self.error(
                    a.span,
                    format!("annotation for unknown label {}", a.value.label),
                ));
            }
            if annotated.insert(&a.value.label, a.span).is_some() {
                return Err(self.error(
                    a.span,
                    format!("label {} is annotated twice", a.value.label),
                ));
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> PResult<()> {
        self.eat(&Tok::Dot);
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses a whole knowledge-base file.
pub fn parse_kb(source: &str) -> Result<KbDocument, ParseError> {
    Parser::new(source)?.document()
}

/// Parses an environmental formula such as `a(x) v ~b`.
pub fn parse_formula(source: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(source)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses an analytical literal such as `isCap(baja,worm123)` or
/// `neg isCap(baja,worm123)`.
pub fn parse_literal(source: &str) -> Result<Literal, ParseError> {
    let mut p = Parser::new(source)?;
    let l = p.literal()?;
    p.finish()?;
    Ok(l)
}

/// Parses a world given as a comma-separated atom list, optionally in
/// braces. The empty string is the empty world.
pub fn parse_world(source: &str) -> Result<World, ParseError> {
    let mut p = Parser::new(source)?;
    let braced = p.eat(&Tok::LBrace);
    let mut atoms = Vec::new();
    let closes = |p: &Parser| p.at_end() || (braced && p.peek() == Some(&Tok::RBrace));
    if !closes(&p) {
        loop {
            atoms.push(p.ground_atom(ModelTag::Em)?);
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
    }
    if braced {
        p.expect(&Tok::RBrace)?;
    }
    p.finish()?;
    Ok(World::new(atoms))
}

/// Parses an evidence file: one `formula.` (certain) or `formula : p +- e.`
/// statement per line.
pub fn parse_evidence(source: &str) -> Result<Vec<Spanned<ProbabilisticFormula>>, ParseError> {
    let mut p = Parser::new(source)?;
    let mut out = Vec::new();
    while !p.at_end() {
        let span = p.span();
        let f = p.formula()?;
        p.require_ground(&f, span)?;
        let pf = if p.peek() == Some(&Tok::Colon) {
            p.probability(f, span)?
        } else {
            ProbabilisticFormula::certain(f)
        };
        p.expect(&Tok::Dot)?;
        out.push(Spanned::new(pf, span));
    }
    Ok(out)
}
