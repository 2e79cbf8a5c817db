/** Token-annotation exchange format shared with the analysis pipeline. */

export interface ExchangeToken {
  /** Surface text; never empty, never whitespace. */
  text: string;
  /** Universal POS tag from the 16-tag inventory in use. */
  upos: string;
  /** Raw dependency label; empty when the tagger has no parser. */
  dep: string;
  /** Entity type name, or empty when the token is not inside an entity. */
  ent: string;
}

export interface AnnotatedLine {
  doc_id: string;
  tokens: ExchangeToken[];
}

export interface InputLine {
  doc_id: string;
  text: string;
}

/** The UPOS inventory consumed downstream (the scheme omits SCONJ for English). */
export const UPOS_TAGS = new Set([
  "ADP", "PRON", "X", "DET", "ADJ", "PROPN", "VERB", "PART",
  "CCONJ", "INTJ", "NOUN", "NUM", "ADV", "PUNCT", "SYM", "AUX",
]);

export function validateLine(line: AnnotatedLine): string | null {
  if (typeof line.doc_id !== "string" || line.doc_id.length === 0) {
    return "doc_id must be a non-empty string";
  }
  if (!Array.isArray(line.tokens)) {
    return "tokens must be an array";
  }
  for (const token of line.tokens) {
    if (typeof token.text !== "string" || token.text.length === 0 || /\s/.test(token.text)) {
      return `bad token text: ${JSON.stringify(token.text)}`;
    }
    if (!UPOS_TAGS.has(token.upos)) {
      return `upos outside inventory: ${token.upos}`;
    }
    if (typeof token.dep !== "string" || typeof token.ent !== "string") {
      return "dep and ent must be strings";
    }
  }
  return null;
}
