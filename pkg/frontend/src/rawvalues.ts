// Span-tracking JSON scanner.
//
// The detector serializes numbers like 1.0 and 6.49e-15; re-formatting them
// through JS numbers would change the bytes (1.0 -> "1").  The panel instead
// shows the literal substrings of the response, extracted here.

export interface Span {
  start: number;
  end: number; // exclusive
}

export type RawNode =
  | { kind: "object"; span: Span; members: Record<string, RawNode> }
  | { kind: "array"; span: Span; elements: RawNode[] }
  | { kind: "literal"; span: Span };

export function literalText(text: string, node: RawNode): string {
  return text.slice(node.span.start, node.span.end);
}

export function parseSpans(text: string): RawNode {
  const parser = new SpanParser(text);
  const node = parser.parseValue();
  parser.skipWs();
  if (!parser.done()) throw new Error(`trailing JSON content at ${parser.pos}`);
  return node;
}

/** Member node at a key path, or null when absent along the way. */
export function nodeAt(root: RawNode, path: (string | number)[]): RawNode | null {
  let node: RawNode = root;
  for (const step of path) {
    if (typeof step === "number") {
      if (node.kind !== "array" || step >= node.elements.length) return null;
      node = node.elements[step];
    } else {
      if (node.kind !== "object" || !(step in node.members)) return null;
      node = node.members[step];
    }
  }
  return node;
}

class SpanParser {
  pos = 0;

  constructor(private readonly text: string) {}

  done(): boolean {
    return this.pos >= this.text.length;
  }

  skipWs(): void {
    while (!this.done() && " \t\n\r".includes(this.text[this.pos])) this.pos++;
  }

  parseValue(): RawNode {
    this.skipWs();
    if (this.done()) throw new Error("unexpected end of JSON");
    const ch = this.text[this.pos];
    if (ch === "{") return this.parseObject();
    if (ch === "[") return this.parseArray();
    if (ch === '"') return this.parseStringLiteral();
    return this.parseBareLiteral();
  }

  private parseObject(): RawNode {
    const start = this.pos;
    this.expect("{");
    const members: Record<string, RawNode> = {};
    this.skipWs();
    if (this.peek() === "}") {
      this.pos++;
      return { kind: "object", span: { start, end: this.pos }, members };
    }
    for (;;) {
      this.skipWs();
      const key = this.parseStringValue();
      this.skipWs();
      this.expect(":");
      members[key] = this.parseValue();
      this.skipWs();
      if (this.peek() === ",") {
        this.pos++;
        continue;
      }
      this.expect("}");
      return { kind: "object", span: { start, end: this.pos }, members };
    }
  }

  private parseArray(): RawNode {
    const start = this.pos;
    this.expect("[");
    const elements: RawNode[] = [];
    this.skipWs();
    if (this.peek() === "]") {
      this.pos++;
      return { kind: "array", span: { start, end: this.pos }, elements };
    }
    for (;;) {
      elements.push(this.parseValue());
      this.skipWs();
      if (this.peek() === ",") {
        this.pos++;
        continue;
      }
      this.expect("]");
      return { kind: "array", span: { start, end: this.pos }, elements };
    }
  }

  private parseStringLiteral(): RawNode {
    const start = this.pos;
    this.parseStringValue();
    return { kind: "literal", span: { start, end: this.pos } };
  }

  private parseStringValue(): string {
    this.expect('"');
    const from = this.pos;
    while (!this.done()) {
      const ch = this.text[this.pos];
      if (ch === "\\") {
        this.pos += 2;
        continue;
      }
      if (ch === '"') {
        const raw = this.text.slice(from, this.pos);
        this.pos++;
        return JSON.parse(`"${raw}"`) as string;
      }
      this.pos++;
    }
    throw new Error("unterminated string");
  }

  private parseBareLiteral(): RawNode {
    const start = this.pos;
    while (!this.done() && !',}] \t\n\r'.includes(this.text[this.pos])) this.pos++;
    if (this.pos === start) throw new Error(`unexpected character at ${start}`);
    return { kind: "literal", span: { start, end: this.pos } };
  }

  private peek(): string {
    return this.text[this.pos] ?? "";
  }

  private expect(ch: string): void {
    if (this.text[this.pos] !== ch) {
      throw new Error(`expected ${ch} at ${this.pos}, got ${this.text[this.pos] ?? "EOF"}`);
    }
    this.pos++;
  }
}
