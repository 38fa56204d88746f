//! Recursive-descent parser for the ASCII tool syntax.
//!
//! ```text
//! program   := { line } ;
//! line      := [ IDENT "=" ] seq  ;
//! seq       := par { ";" seq }
//! par       := choice { "||" "{" [ idlist ] "}" choice }
//! choice    := prefix { ("-" | "+" | "*" "{" NUMBER "}") prefix }
//! prefix    := atom [ "." prefix ]
//! atom      := "0" | IDENT | "<" IDENT "," (NUMBER | "inf") ">" [ "." prefix ] | "(" seq ")"
//! idlist    := IDENT { "," IDENT }
//! ```

mod lexer;

use std::collections::{BTreeMap, HashMap};

pub use lexer::{tokenize, Position, Token, TokenKind};

use crate::ast::{ActionName, DefinitionEnv, Process, SyncSet};
use crate::numeric::{NumericError, Probability, Rate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{position}: unexpected character `{found}`")]
    Lex { position: Position, found: char },
    #[error("{position}: expected {expected}, found {found}")]
    Unexpected {
        position: Position,
        expected: String,
        found: String,
    },
    #[error("{position}: {source}")]
    Invalid {
        position: Position,
        #[source]
        source: NumericError,
    },
    #[error("{position}: `{name}` is defined more than once")]
    DuplicateDefinition { position: Position, name: String },
    #[error("{position}: unbound process variable `{name}`")]
    UnboundVariable { position: Position, name: String },
}

impl ParseError {
    pub fn position(&self) -> Position {
        match self {
            ParseError::Lex { position, .. }
            | ParseError::Unexpected { position, .. }
            | ParseError::Invalid { position, .. }
            | ParseError::DuplicateDefinition { position, .. }
            | ParseError::UnboundVariable { position, .. } => *position,
        }
    }
}

/// Name, position of the name, body, and variable occurrences in the body.
type Definition = (String, Position, Process, Vec<(String, Position)>);

/// Parses a whole token stream as one process expression.
pub fn parse_process(tokens: &[Token]) -> Result<Process, ParseError> {
    let eof = tokens.last().map(Token::end).unwrap_or(Position::new(1, 1));
    let mut parser = Parser::new(tokens, eof);
    let p = parser.seq()?;
    parser.expect_end()?;
    Ok(p)
}

/// Tokenizes and parses a single process expression.
pub fn parse_process_str(source: &str) -> Result<Process, ParseError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser::new(&tokens, end_of(source));
    let p = parser.seq()?;
    parser.expect_end()?;
    Ok(p)
}

/// Parses a definition file: one `NAME = PROCESS` or bare `PROCESS` per line.
///
/// A bare process is bound to `main`. The root is `main` when present and the
/// last definition otherwise. An unbound identifier that starts with a
/// lowercase letter denotes the action constant `name.0`; any other unbound
/// identifier is an error.
pub fn parse_program(source: &str) -> Result<DefinitionEnv, ParseError> {
    let tokens = tokenize(source)?;
    let eof = end_of(source);

    let mut lines: Vec<&[Token]> = Vec::new();
    let mut start = 0;
    for i in 1..=tokens.len() {
        if i == tokens.len() || tokens[i].position.line != tokens[start].position.line {
            lines.push(&tokens[start..i]);
            start = i;
        }
    }

    let mut definitions: Vec<Definition> = Vec::new();
    let mut seen: HashMap<String, Position> = HashMap::new();
    for line in lines {
        let (name, position, body) = match line {
            [head, eq, rest @ ..] if head.kind == TokenKind::Ident && eq.kind == TokenKind::Equals => {
                (head.lexeme.clone(), head.position, rest)
            }
            _ => ("main".to_string(), line[0].position, line),
        };
        if seen.contains_key(&name) {
            return Err(ParseError::DuplicateDefinition { position, name });
        }
        let line_end = line.last().map(Token::end).unwrap_or(eof);
        let mut parser = Parser::new(body, line_end);
        let process = parser.seq()?;
        parser.expect_end()?;
        seen.insert(name.clone(), position);
        definitions.push((name, position, process, parser.vars));
    }

    let root = if seen.contains_key("main") {
        "main".to_string()
    } else {
        match definitions.last() {
            Some((name, ..)) => name.clone(),
            None => {
                return Err(ParseError::Unexpected {
                    position: eof,
                    expected: "a process definition".into(),
                    found: "end of input".into(),
                })
            }
        }
    };

    let mut bindings = BTreeMap::new();
    for (name, _, process, vars) in definitions {
        for (var, position) in &vars {
            if !seen.contains_key(var) && !is_action_constant(var) {
                return Err(ParseError::UnboundVariable {
                    position: *position,
                    name: var.clone(),
                });
            }
        }
        bindings.insert(name, resolve_constants(process, &seen));
    }
    DefinitionEnv::new(bindings, root).map_err(|e| ParseError::Unexpected {
        position: eof,
        expected: "a well-formed program".into(),
        found: e.to_string(),
    })
}

fn is_action_constant(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_lowercase())
}

fn resolve_constants(p: Process, bound: &HashMap<String, Position>) -> Process {
    let go = |p: Box<Process>| Box::new(resolve_constants(*p, bound));
    match p {
        Process::Var(name) if !bound.contains_key(&name) => match ActionName::new(name.clone()) {
            Ok(action) => Process::prefix(action, Rate::Infinite, Process::Nil),
            Err(_) => Process::Var(name),
        },
        Process::Nil | Process::Var(_) => p,
        Process::Prefix(a, r, q) => Process::Prefix(a, r, go(q)),
        Process::Seq(p, q) => Process::Seq(go(p), go(q)),
        Process::IntChoice(p, q) => Process::IntChoice(go(p), go(q)),
        Process::ExtChoice(p, q) => Process::ExtChoice(go(p), go(q)),
        Process::ProbChoice(r, p, q) => Process::ProbChoice(r, go(p), go(q)),
        Process::Par(a, p, q) => Process::Par(a, go(p), go(q)),
    }
}

fn end_of(source: &str) -> Position {
    let line = source.split('\n').count();
    let last = source.rsplit('\n').next().unwrap_or("");
    Position::new(line, last.chars().count() + 1)
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    eof: Position,
    vars: Vec<(String, Position)>,
}

impl<'t> Parser<'t> {
    fn new(tokens: &'t [Token], eof: Position) -> Self {
        Parser {
            tokens,
            pos: 0,
            eof,
            vars: Vec::new(),
        }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::Unexpected {
                position: t.position,
                expected: expected.to_string(),
                found: format!("`{}`", t.lexeme),
            },
            None => ParseError::Unexpected {
                position: self.eof,
                expected: expected.to_string(),
                found: "end of input".to_string(),
            },
        }
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<&'t Token, ParseError> {
        if self.peek_kind() == Some(kind) {
            Ok(self.bump().unwrap())
        } else {
            Err(self.error(expected))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            Err(self.error("an operator or end of input"))
        } else {
            Ok(())
        }
    }

    fn seq(&mut self) -> Result<Process, ParseError> {
        let left = self.par()?;
        if self.peek_kind() == Some(TokenKind::Semi) {
            self.bump();
            let right = self.seq()?;
            return Ok(Process::seq(left, right));
        }
        Ok(left)
    }

    fn par(&mut self) -> Result<Process, ParseError> {
        let mut left = self.choice()?;
        while self.peek_kind() == Some(TokenKind::ParBar) {
            self.bump();
            let sync = self.sync_set()?;
            let right = self.choice()?;
            left = Process::par(sync, left, right);
        }
        Ok(left)
    }

    fn sync_set(&mut self) -> Result<SyncSet, ParseError> {
        self.expect(TokenKind::LBrace, "`{` opening a synchronisation set")?;
        let mut names = Vec::new();
        if self.peek_kind() != Some(TokenKind::RBrace) {
            loop {
                names.push(self.action_name()?);
                if self.peek_kind() == Some(TokenKind::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(TokenKind::RBrace, "`,` or `}`")?;
        Ok(names.into_iter().collect())
    }

    fn choice(&mut self) -> Result<Process, ParseError> {
        let mut left = self.prefix()?;
        loop {
            match self.peek_kind() {
                Some(TokenKind::Minus) => {
                    self.bump();
                    left = Process::int_choice(left, self.prefix()?);
                }
                Some(TokenKind::Plus) => {
                    self.bump();
                    left = Process::ext_choice(left, self.prefix()?);
                }
                Some(TokenKind::Star) => {
                    self.bump();
                    self.expect(TokenKind::LBrace, "`{` after `*`")?;
                    let prob = self.probability()?;
                    self.expect(TokenKind::RBrace, "`}`")?;
                    left = Process::prob_choice(prob, left, self.prefix()?);
                }
                _ => return Ok(left),
            }
        }
    }

    fn prefix(&mut self) -> Result<Process, ParseError> {
        match self.peek_kind() {
            Some(TokenKind::Zero) => {
                self.bump();
                Ok(Process::Nil)
            }
            Some(TokenKind::Ident) => {
                let token = self.bump().unwrap();
                if self.peek_kind() == Some(TokenKind::Dot) {
                    self.bump();
                    let action = ActionName::new(token.lexeme.clone()).expect("lexer yields identifiers");
                    Ok(Process::prefix(action, Rate::Infinite, self.prefix()?))
                } else {
                    self.vars.push((token.lexeme.clone(), token.position));
                    Ok(Process::Var(token.lexeme.clone()))
                }
            }
            Some(TokenKind::LAngle) => {
                self.bump();
                let action = self.action_name()?;
                self.expect(TokenKind::Comma, "`,` after the action name")?;
                let rate = self.rate()?;
                self.expect(TokenKind::RAngle, "`>`")?;
                let continuation = if self.peek_kind() == Some(TokenKind::Dot) {
                    self.bump();
                    self.prefix()?
                } else {
                    Process::Nil
                };
                Ok(Process::prefix(action, rate, continuation))
            }
            Some(TokenKind::LParen) => {
                self.bump();
                let inner = self.seq()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error("a process")),
        }
    }

    fn action_name(&mut self) -> Result<ActionName, ParseError> {
        let token = self.expect(TokenKind::Ident, "an action name")?;
        Ok(ActionName::new(token.lexeme.clone()).expect("lexer yields identifiers"))
    }

    fn rate(&mut self) -> Result<Rate, ParseError> {
        match self.peek_kind() {
            Some(TokenKind::Inf) => {
                self.bump();
                Ok(Rate::Infinite)
            }
            Some(TokenKind::Number) | Some(TokenKind::Zero) => {
                let token = self.bump().unwrap();
                let value: f64 = token.lexeme.parse().map_err(|_| ParseError::Invalid {
                    position: token.position,
                    source: NumericError::Malformed(token.lexeme.clone()),
                })?;
                Rate::finite(value).map_err(|_| ParseError::Invalid {
                    position: token.position,
                    source: NumericError::InvalidRate(token.lexeme.clone()),
                })
            }
            _ => Err(self.error("a rate (number or `inf`)")),
        }
    }

    fn probability(&mut self) -> Result<Probability, ParseError> {
        match self.peek_kind() {
            Some(TokenKind::Number) | Some(TokenKind::Zero) => {
                let token = self.bump().unwrap();
                Probability::parse(&token.lexeme).map_err(|source| ParseError::Invalid {
                    position: token.position,
                    source,
                })
            }
            _ => Err(self.error("a probability")),
        }
    }
}
