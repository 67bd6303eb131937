// Client-side session state. The snippet list always mirrors the server's
// ordered list: mutations trigger a refetch rather than a local edit.

import { AnnotationRow, EncodeSummary, SnippetRow } from './api.js';

export interface UiSessionState {
  token: string | null;
  categories: AnnotationRow[];
  selectedCategory: string | null;
  classList: AnnotationRow[];
  snippets: SnippetRow[];
  lastEncode: EncodeSummary | null;
}

export function initialState(): UiSessionState {
  return {
    token: null,
    categories: [],
    selectedCategory: null,
    classList: [],
    snippets: [],
    lastEncode: null,
  };
}

// Monotone ticket counter: a response is applied only if no newer request
// for the same slot was issued while it was in flight.
export class RequestGate {
  private counter = 0;

  open(): number {
    this.counter += 1;
    return this.counter;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.counter;
  }
}
