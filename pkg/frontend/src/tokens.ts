/**
 * Tokenizer for .wstar scripts.
 *
 * The language is line oriented; logical lines continue while brackets
 * stay open and `#` starts a comment. Numbers may carry a trailing `i`
 * for imaginary literals.
 */

export type TokenKind = "number" | "ident" | "arrow" | "tensorop" | "punct";

export interface Token {
  kind: TokenKind;
  text: string;
  line: number;
  column: number;
}

export class ScriptSyntaxError extends Error {
  constructor(message: string, public line: number, public column: number) {
    super(`${message} (line ${line}, column ${column})`);
    this.name = "ScriptSyntaxError";
  }
}

const TOKEN_RE =
  /(\s+)|((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?)|([A-Za-z_][A-Za-z_0-9]*)|(->)|(\(x\))|([[\]{}()=:,;*+\-])/y;

export function tokenizeLine(text: string, line: number): Token[] {
  const tokens: Token[] = [];
  let pos = 0;
  while (pos < text.length) {
    TOKEN_RE.lastIndex = pos;
    const m = TOKEN_RE.exec(text);
    if (m === null) {
      throw new ScriptSyntaxError(
        `unexpected character ${JSON.stringify(text[pos])}`,
        line,
        pos + 1
      );
    }
    const kinds: (TokenKind | null)[] = [
      null,
      "number",
      "ident",
      "arrow",
      "tensorop",
      "punct",
    ];
    for (let g = 1; g < m.length; g++) {
      if (m[g] !== undefined && kinds[g] !== null) {
        tokens.push({ kind: kinds[g] as TokenKind, text: m[g], line, column: pos + 1 });
      }
    }
    pos = TOKEN_RE.lastIndex;
  }
  return tokens;
}

function bracketDepth(s: string): number {
  let depth = 0;
  for (const c of s) {
    if ("[{(".includes(c)) depth += 1;
    if ("]})".includes(c)) depth -= 1;
  }
  return depth;
}

/** Split source text into (starting line number, logical line) pairs. */
export function logicalLines(text: string): Array<[number, string]> {
  const out: Array<[number, string]> = [];
  let buffer = "";
  let start = 0;
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const body = lines[i].split("#", 1)[0];
    if (!buffer && !body.trim()) continue;
    if (!buffer) start = i + 1;
    buffer += (buffer ? "\n" : "") + body;
    if (bracketDepth(buffer) > 0) continue;
    if (buffer.trim()) out.push([start, buffer]);
    buffer = "";
  }
  if (buffer.trim()) {
    if (bracketDepth(buffer) > 0) {
      throw new ScriptSyntaxError("unbalanced brackets at end of input", start, 1);
    }
    out.push([start, buffer]);
  }
  return out;
}
