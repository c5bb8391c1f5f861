use std::collections::HashSet;

use super::lexer::{lex, Tok};
use super::{AutomatonDecl, Decl, DslError, ErrorKind, ModelFile, Pos, TransitionDecl};
use crate::alphabet::Alphabet;
use crate::expr::{eval_alpha, AlphaExpr, BinOp, Bindings, Expr};
use crate::name::{Name, Side};
use crate::ops::{ParWireKind, SeqWireKind};
use crate::weight::Weight;

const RESERVED: &[&str] = &[
    "alphabet", "automaton", "let", "unit", "x", "oplus", "norm", "pow", "sfb", "pfb", "seqwire", "parwire", "seqconst",
    "parconst", "rename",
];

/// Parses a model file, checking names, references and weights.
pub fn parse(text: &str) -> Result<ModelFile, DslError> {
    let mut p = Parser { toks: lex(text)?, i: 0, alphabets: Bindings::new(), automata: HashSet::new() };
    let mut decls = Vec::new();
    while p.peek() != &Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(ModelFile { decls })
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    alphabets: Bindings,
    automata: HashSet<String>,
}

type PResult<T> = Result<T, DslError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, kind: ErrorKind, msg: impl Into<String>) -> PResult<T> {
        Err(DslError::new(kind, self.pos(), msg))
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.peek() == &t {
            self.bump();
            Ok(())
        } else {
            self.err(ErrorKind::Syntax, format!("expected {}, found {}", t.describe(), self.peek().describe()))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn keyword(&mut self, w: &str) -> PResult<()> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            self.err(ErrorKind::Syntax, format!("expected `{w}`, found {}", self.peek().describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.err(ErrorKind::Syntax, format!("expected a name, found {}", other.describe())),
        }
    }

    /// A fresh declaration name.
    fn decl_name(&mut self, alphabet: bool) -> PResult<String> {
        let pos = self.pos();
        let name = self.ident()?;
        if RESERVED.contains(&name.as_str()) {
            return Err(DslError::new(ErrorKind::Syntax, pos, format!("`{name}` is a reserved word")));
        }
        let taken = if alphabet { self.alphabets.alphabets.contains_key(&name) } else { self.automata.contains(&name) };
        if taken {
            return Err(DslError::new(ErrorKind::DuplicateName, pos, format!("`{name}` is already declared")));
        }
        Ok(name)
    }

    fn decl(&mut self) -> PResult<Decl> {
        if self.is_word("alphabet") {
            self.bump();
            let name = self.decl_name(true)?;
            self.expect(Tok::Eq)?;
            let pos = self.pos();
            let labels = self.set()?;
            let set = crate::OrderedSet::from_vec(labels.clone())
                .map_err(|l| DslError::new(ErrorKind::DuplicateName, pos, format!("label {l} listed twice")))?;
            self.alphabets.alphabets.insert(name.clone(), Alphabet::with_implicit_epsilon(set));
            Ok(Decl::Alphabet { name, labels })
        } else if self.is_word("automaton") {
            self.bump();
            let a = self.automaton()?;
            self.automata.insert(a.name.clone());
            Ok(Decl::Automaton(a))
        } else if self.is_word("let") {
            self.bump();
            let name = self.decl_name(false)?;
            self.expect(Tok::Eq)?;
            let expr = self.expr()?;
            self.automata.insert(name.clone());
            Ok(Decl::Let { name, expr })
        } else {
            self.err(
                ErrorKind::Syntax,
                format!("expected `alphabet`, `automaton` or `let`, found {}", self.peek().describe()),
            )
        }
    }

    // ---- names, sets, weights

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Int(s) => {
                self.bump();
                Ok(Name::atom(&s))
            }
            Tok::Tag(c) => {
                self.bump();
                let side = if c == 'L' { Side::Left } else { Side::Right };
                Ok(Name::tagged(side, self.name()?))
            }
            Tok::LParen => {
                self.bump();
                let mut items = vec![self.name()?];
                while self.peek() == &Tok::Comma {
                    self.bump();
                    items.push(self.name()?);
                }
                self.expect(Tok::RParen)?;
                Ok(Name::Tuple(items))
            }
            other => self.err(ErrorKind::Syntax, format!("expected a name, found {}", other.describe())),
        }
    }

    /// `{a, b, ...}` possibly empty.
    fn set(&mut self) -> PResult<Vec<Name>> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        if self.peek() != &Tok::RBrace {
            items.push(self.name()?);
            while self.peek() == &Tok::Comma {
                self.bump();
                items.push(self.name()?);
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(items)
    }

    fn distinct_set(&mut self) -> PResult<Vec<Name>> {
        let pos = self.pos();
        let items = self.set()?;
        if let Err(d) = crate::OrderedSet::from_vec(items.clone()) {
            return Err(DslError::new(ErrorKind::DuplicateName, pos, format!("{d} listed twice")));
        }
        Ok(items)
    }

    /// `{a: b, ...}`
    fn mapping(&mut self) -> PResult<Vec<(Name, Name)>> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        if self.peek() != &Tok::RBrace {
            loop {
                let k = self.name()?;
                self.expect(Tok::Colon)?;
                items.push((k, self.name()?));
                if self.peek() != &Tok::Comma {
                    break;
                }
                self.bump();
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(items)
    }

    /// `{(a, b), ...}`
    fn pairs(&mut self) -> PResult<Vec<(Name, Name)>> {
        self.expect(Tok::LBrace)?;
        let mut items = Vec::new();
        if self.peek() != &Tok::RBrace {
            loop {
                self.expect(Tok::LParen)?;
                let a = self.name()?;
                self.expect(Tok::Comma)?;
                let b = self.name()?;
                self.expect(Tok::RParen)?;
                items.push((a, b));
                if self.peek() != &Tok::Comma {
                    break;
                }
                self.bump();
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(items)
    }

    fn weight(&mut self) -> PResult<Weight> {
        let pos = self.pos();
        let bad = |msg: String| Err(DslError::new(ErrorKind::InvalidWeight, pos, msg));
        let num = match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                s
            }
            Tok::Minus => return bad("weights must be positive".into()),
            other => return self.err(ErrorKind::Syntax, format!("expected a weight, found {}", other.describe())),
        };
        let text = if self.peek() == &Tok::Slash {
            self.bump();
            match self.bump() {
                Tok::Int(d) => format!("{num}/{d}"),
                other => return bad(format!("expected a denominator, found {}", other.describe())),
            }
        } else if self.peek() == &Tok::Dot {
            return bad("decimal weights are not allowed; write p/q".into());
        } else {
            num
        };
        let w: Weight = match text.parse() {
            Ok(w) => w,
            Err(e) => return bad(format!("{e}")),
        };
        if w.is_zero() {
            return bad("weights must be positive; leave zero transitions out".into());
        }
        Ok(w)
    }

    // ---- alphabets

    fn alpha(&mut self) -> PResult<AlphaExpr> {
        let mut acc = self.alpha_atom()?;
        let mut op: Option<Tok> = None;
        while matches!(self.peek(), Tok::Star | Tok::Plus) {
            let t = self.peek().clone();
            if let Some(o) = &op {
                if o != &t {
                    return self.err(ErrorKind::AmbiguousExpression, "mixing `*` and `+` needs parentheses");
                }
            }
            self.bump();
            let rhs = self.alpha_atom()?;
            acc = if t == Tok::Star {
                AlphaExpr::Product(Box::new(acc), Box::new(rhs))
            } else {
                AlphaExpr::Sum(Box::new(acc), Box::new(rhs))
            };
            op = Some(t);
        }
        Ok(acc)
    }

    fn alpha_atom(&mut self) -> PResult<AlphaExpr> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "unit" => {
                self.bump();
                Ok(AlphaExpr::Unit)
            }
            Tok::Ident(s) => {
                if !self.alphabets.alphabets.contains_key(&s) {
                    return self.err(ErrorKind::UnknownReference, format!("no alphabet named `{s}`"));
                }
                self.bump();
                Ok(AlphaExpr::Named(s))
            }
            Tok::LBrace => Ok(AlphaExpr::Set(self.distinct_set()?)),
            Tok::LParen => {
                self.bump();
                let a = self.alpha()?;
                self.expect(Tok::RParen)?;
                Ok(a)
            }
            other => self.err(ErrorKind::Syntax, format!("expected an alphabet, found {}", other.describe())),
        }
    }

    fn resolve(&self, a: &AlphaExpr) -> Alphabet {
        eval_alpha(a, &self.alphabets).expect("alphabet names are checked while parsing")
    }

    // ---- automata

    fn automaton(&mut self) -> PResult<AutomatonDecl> {
        let name = self.decl_name(false)?;
        self.expect(Tok::LBrace)?;
        self.keyword("left")?;
        let left = self.alpha()?;
        self.expect(Tok::Semi)?;
        self.keyword("right")?;
        let right = self.alpha()?;
        self.expect(Tok::Semi)?;
        self.keyword("top")?;
        let top = self.distinct_set()?;
        self.expect(Tok::Arrow)?;
        let top_pos = self.pos();
        let top_map = self.mapping()?;
        self.expect(Tok::Semi)?;
        self.keyword("bottom")?;
        let bottom = self.distinct_set()?;
        self.expect(Tok::Arrow)?;
        let bottom_pos = self.pos();
        let bottom_map = self.mapping()?;
        self.expect(Tok::Semi)?;
        self.keyword("states")?;
        let mut states = Vec::new();
        let mut seen = HashSet::new();
        while self.peek() != &Tok::Semi {
            let pos = self.pos();
            let s = self.name()?;
            if !seen.insert(s.clone()) {
                return Err(DslError::new(ErrorKind::DuplicateName, pos, format!("state {s} declared twice")));
            }
            states.push(s);
        }
        self.expect(Tok::Semi)?;

        let check_map = |set: &[Name], map: &[(Name, Name)], pos: Pos, which: &str| -> PResult<()> {
            let mut keys = HashSet::new();
            for (p, s) in map {
                if !set.contains(p) {
                    return Err(DslError::new(ErrorKind::UnknownReference, pos, format!("{p} is not in the {which} set")));
                }
                if !keys.insert(p) {
                    return Err(DslError::new(ErrorKind::DuplicateName, pos, format!("{p} mapped twice")));
                }
                if !seen.contains(s) {
                    return Err(DslError::new(ErrorKind::UnknownReference, pos, format!("no state {s}")));
                }
            }
            if let Some(p) = set.iter().find(|p| !keys.contains(p)) {
                return Err(DslError::new(ErrorKind::Syntax, pos, format!("{which} point {p} is not mapped")));
            }
            Ok(())
        };
        check_map(&top, &top_map, top_pos, "top")?;
        check_map(&bottom, &bottom_map, bottom_pos, "bottom")?;

        let (la, ra) = (self.resolve(&left), self.resolve(&right));
        let mut transitions = Vec::new();
        let mut keys = HashSet::new();
        while self.peek() != &Tok::RBrace {
            let pos = self.pos();
            let from = self.name()?;
            self.expect(Tok::EdgeOpen)?;
            let lpos = self.pos();
            let l = self.name()?;
            self.expect(Tok::Slash)?;
            let rpos = self.pos();
            let r = self.name()?;
            self.expect(Tok::EdgeClose)?;
            let tpos = self.pos();
            let to = self.name()?;
            self.expect(Tok::Colon)?;
            let weight = self.weight()?;
            self.expect(Tok::Semi)?;
            for (s, p) in [(&from, pos), (&to, tpos)] {
                if !seen.contains(s) {
                    return Err(DslError::new(ErrorKind::UnknownReference, p, format!("no state {s}")));
                }
            }
            if la.index_of(&l).is_none() {
                return Err(DslError::new(ErrorKind::UnknownReference, lpos, format!("{l} is not a left label")));
            }
            if ra.index_of(&r).is_none() {
                return Err(DslError::new(ErrorKind::UnknownReference, rpos, format!("{r} is not a right label")));
            }
            if !keys.insert((from.clone(), l.clone(), r.clone(), to.clone())) {
                return Err(DslError::new(ErrorKind::DuplicateName, pos, "transition declared twice"));
            }
            transitions.push(TransitionDecl { from, left: l, right: r, to, weight });
        }
        self.expect(Tok::RBrace)?;
        Ok(AutomatonDecl { name, left, right, top, top_map, bottom, bottom_map, states, transitions })
    }

    // ---- expressions

    fn binop(&self) -> Option<BinOp> {
        match self.peek() {
            Tok::Ident(s) if s == "oplus" => Some(BinOp::Sum),
            Tok::Ident(s) if s == "x" => Some(BinOp::Product),
            Tok::SemiSemi => Some(BinOp::SeqCompose),
            Tok::Plus => Some(BinOp::LocalSum),
            Tok::Dot => Some(BinOp::LocalSeq),
            Tok::Bars => Some(BinOp::Comm),
            _ => None,
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let first = self.atom()?;
        let Some(op) = self.binop() else {
            return Ok(first);
        };
        let mut items = vec![first];
        while let Some(next) = self.binop() {
            if next != op {
                return self.err(
                    ErrorKind::AmbiguousExpression,
                    format!("`{}` after `{}` needs parentheses", next.token(), op.token()),
                );
            }
            self.bump();
            items.push(self.atom()?);
        }
        Ok(Expr::Chain(op, items))
    }

    fn parenthesised(&mut self) -> PResult<Expr> {
        self.expect(Tok::LParen)?;
        let e = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let pos = self.pos();
        let word = match self.peek().clone() {
            Tok::LParen => return self.parenthesised(),
            Tok::Ident(s) => s,
            other => return self.err(ErrorKind::Syntax, format!("expected an expression, found {}", other.describe())),
        };
        self.bump();
        let inner = |p: &mut Self| p.parenthesised().map(Box::new);
        Ok(match word.as_str() {
            "norm" => Expr::Normalize(inner(self)?),
            "pow" => {
                self.expect(Tok::LBracket)?;
                let kpos = self.pos();
                let k = match self.bump() {
                    Tok::Int(s) => s.parse::<usize>().ok().filter(|&k| k >= 1),
                    _ => None,
                };
                let Some(k) = k else {
                    return Err(DslError::new(ErrorKind::Syntax, kpos, "expected a step count of at least 1"));
                };
                self.expect(Tok::RBracket)?;
                Expr::Power(k, inner(self)?)
            }
            "sfb" => {
                self.expect(Tok::LBracket)?;
                let z = self.distinct_set()?;
                self.expect(Tok::RBracket)?;
                Expr::Sfb(z, inner(self)?)
            }
            "pfb" => {
                self.expect(Tok::LBracket)?;
                let c = self.alpha()?;
                self.expect(Tok::RBracket)?;
                Expr::Pfb(c, inner(self)?)
            }
            "seqwire" | "parwire" => {
                self.expect(Tok::LBracket)?;
                let kpos = self.pos();
                let kw = self.ident()?;
                let e = if word == "seqwire" {
                    let kind = SeqWireKind::from_keyword(&kw)
                        .ok_or_else(|| DslError::new(ErrorKind::Syntax, kpos, format!("unknown sequential wire `{kw}`")))?;
                    let mut params = Vec::new();
                    while self.peek() == &Tok::Semi {
                        self.bump();
                        params.push(self.distinct_set()?);
                    }
                    Expr::SeqWire(kind, params)
                } else {
                    let kind = ParWireKind::from_keyword(&kw)
                        .ok_or_else(|| DslError::new(ErrorKind::Syntax, kpos, format!("unknown parallel wire `{kw}`")))?;
                    let mut params = Vec::new();
                    while self.peek() == &Tok::Semi {
                        self.bump();
                        params.push(self.alpha()?);
                    }
                    Expr::ParWire(kind, params)
                };
                self.expect(Tok::RBracket)?;
                e
            }
            "seqconst" => {
                self.expect(Tok::LBracket)?;
                let top = self.distinct_set()?;
                self.expect(Tok::Semi)?;
                let bottom = self.distinct_set()?;
                self.expect(Tok::Semi)?;
                let pairs = self.pairs()?;
                self.expect(Tok::RBracket)?;
                Expr::SeqConst { top, bottom, pairs }
            }
            "parconst" => {
                self.expect(Tok::LBracket)?;
                let left = self.alpha()?;
                self.expect(Tok::Semi)?;
                let right = self.alpha()?;
                self.expect(Tok::Semi)?;
                let pairs = self.pairs()?;
                self.expect(Tok::RBracket)?;
                Expr::ParConst { left, right, pairs }
            }
            "rename" => {
                self.expect(Tok::LBracket)?;
                let map = self.mapping()?;
                self.expect(Tok::RBracket)?;
                Expr::Rename(map, inner(self)?)
            }
            _ if RESERVED.contains(&word.as_str()) => {
                return Err(DslError::new(ErrorKind::Syntax, pos, format!("`{word}` cannot start an expression")));
            }
            _ => {
                if !self.automata.contains(&word) {
                    return Err(DslError::new(ErrorKind::UnknownReference, pos, format!("no automaton named `{word}`")));
                }
                // `name(` is almost certainly a misspelt operation
                if self.peek() == &Tok::LParen {
                    return self.err(ErrorKind::Syntax, format!("`{word}` is not an operation"));
                }
                Expr::Named(word)
            }
        })
    }
}
