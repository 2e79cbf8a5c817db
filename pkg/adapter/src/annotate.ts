/**
 * Annotation core: runs the wink-nlp English pipeline over normalized
 * document texts and emits exchange-format token lines.
 *
 * The model tags UPOS and recognizes a set of entity types; it has no
 * dependency parser, so `dep` is emitted empty and the consumer's label
 * mapping treats it as "other". SCONJ (unused by the downstream 16-tag
 * scheme for English) is folded into ADP, and whitespace tokens are
 * dropped.
 */

import winkNLP, { type ItemEntity, type ItemToken, type WinkMethods } from "wink-nlp";
import model from "wink-eng-lite-web-model";

import { AnnotatedLine, ExchangeToken, InputLine, UPOS_TAGS } from "./schema";

let nlpSingleton: WinkMethods | null = null;

export function loadPipeline(): WinkMethods {
  if (nlpSingleton === null) {
    nlpSingleton = winkNLP(model);
  }
  return nlpSingleton;
}

function mapUpos(tag: string): string {
  if (tag === "SCONJ") return "ADP";
  return UPOS_TAGS.has(tag) ? tag : "X";
}

const URL_SENTINEL = "@url@";

/** Re-join sentinel fragments the tokenizer split apart ("@url" + "@"). */
function mergeUrlSentinels(tokens: ExchangeToken[]): ExchangeToken[] {
  const out: ExchangeToken[] = [];
  let i = 0;
  while (i < tokens.length) {
    if (URL_SENTINEL.startsWith(tokens[i].text)) {
      let joined = tokens[i].text;
      let j = i + 1;
      while (j < tokens.length && joined.length < URL_SENTINEL.length
             && URL_SENTINEL.startsWith(joined + tokens[j].text)) {
        joined += tokens[j].text;
        j += 1;
      }
      if (joined === URL_SENTINEL) {
        out.push({ text: URL_SENTINEL, upos: "X", dep: "", ent: "" });
        i = j;
        continue;
      }
    }
    out.push(tokens[i]);
    i += 1;
  }
  return out;
}

export function annotateText(nlp: WinkMethods, text: string): ExchangeToken[] {
  const its = nlp.its;
  const doc = nlp.readDoc(text);

  const entityByToken = new Map<number, string>();
  doc.entities().each((entity: ItemEntity) => {
    const span = entity.out(its.span) as unknown as [number, number];
    const type = entity.out(its.type) as string;
    for (let i = span[0]; i <= span[1]; i += 1) {
      entityByToken.set(i, type);
    }
  });

  const tokens: ExchangeToken[] = [];
  doc.tokens().each((token: ItemToken, index: number) => {
    const text = token.out();
    if (text.length === 0 || /^\s+$/.test(text)) return;
    tokens.push({
      text,
      upos: mapUpos(token.out(its.pos) as string),
      dep: "",
      ent: entityByToken.get(index) ?? "",
    });
  });
  return mergeUrlSentinels(tokens);
}

export interface AnnotateResult {
  lines: AnnotatedLine[];
  failures: number;
}

/** Annotate parsed input lines, preserving order; a per-document failure
 * yields an empty token list rather than aborting the run. */
export function annotateDocs(
  docs: InputLine[],
  batchSize = 64,
  warn: (message: string) => void = (m) => process.stderr.write(m + "\n"),
): AnnotateResult {
  const nlp = loadPipeline();
  const lines: AnnotatedLine[] = [];
  let failures = 0;
  for (let start = 0; start < docs.length; start += batchSize) {
    for (const doc of docs.slice(start, start + batchSize)) {
      try {
        lines.push({ doc_id: doc.doc_id, tokens: annotateText(nlp, doc.text) });
      } catch (err) {
        failures += 1;
        warn(`warning: annotation failed for ${doc.doc_id}: ${(err as Error).message}`);
        lines.push({ doc_id: doc.doc_id, tokens: [] });
      }
    }
  }
  return { lines, failures };
}

export function parseInputLine(raw: string, lineNo: number): InputLine {
  const obj = JSON.parse(raw) as Partial<InputLine>;
  if (typeof obj.doc_id !== "string" || typeof obj.text !== "string") {
    throw new Error(`line ${lineNo}: expected {"doc_id": string, "text": string}`);
  }
  return { doc_id: obj.doc_id, text: obj.text };
}
