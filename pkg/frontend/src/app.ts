// Single-view workbench: load an ontology session, browse categories and
// class descriptions, annotate text snippets, encode, and export.

import {
  AnnotationRow,
  ApiError,
  FORMAT_TOKENS,
  FormatToken,
  ReportApi,
} from './api.js';
import { browserDownload, DownloadSink } from './download.js';
import { initialState, RequestGate, UiSessionState } from './state.js';

export interface AppOptions {
  download?: DownloadSink;
  dialog?: (message: string) => void;
}

export interface AppHandle {
  state: UiSessionState;
  loadSession(): Promise<void>;
  annotate(): Promise<void>;
  removeSnippet(id: string): Promise<void>;
  encode(): Promise<void>;
  exportChosen(): Promise<void>;
  selectCategory(iri: string): Promise<void>;
  selectClass(iri: string): void;
}

const SHELL = `
  <div id="error-banner" class="banner" hidden></div>
  <section class="session-bar">
    <label>Ontology
      <input id="ontology-input" type="text" placeholder="URL or path of the ontology document">
    </label>
    <button id="load-button" type="button">Load</button>
    <span id="session-status"></span>
  </section>
  <section id="annotation-panel" hidden>
    <div class="pickers">
      <label>Category
        <select id="category-select"></select>
      </label>
      <label>Class
        <select id="class-select"></select>
      </label>
    </div>
    <p id="class-comment" class="helper"></p>
    <label>Model card text
      <textarea id="snippet-text" rows="4"></textarea>
    </label>
    <div class="annotate-row">
      <button id="annotate-button" type="button" disabled>Annotate</button>
      <span id="annotate-error" class="inline-error" hidden></span>
    </div>
    <table id="snippet-table">
      <thead><tr><th>Id</th><th>Text</th><th>Class</th><th></th></tr></thead>
      <tbody id="snippet-rows"></tbody>
    </table>
    <div class="encode-row">
      <button id="encode-button" type="button">Encode</button>
      <span id="encode-summary"></span>
    </div>
    <div id="orphan-warning" class="warning-amber" hidden></div>
    <ul id="warning-list"></ul>
    <div class="export-row">
      <label>Format
        <select id="format-select"></select>
      </label>
      <button id="export-button" type="button">Export</button>
    </div>
  </section>
`;

function mustFind<T extends HTMLElement>(container: HTMLElement, id: string): T {
  const element = container.querySelector(`#${id}`);
  if (!element) {
    throw new Error(`missing element #${id}`);
  }
  return element as T;
}

export function wireApp(
  container: HTMLElement,
  api: ReportApi,
  options: AppOptions = {},
): AppHandle {
  container.innerHTML = SHELL;
  const doc = container.ownerDocument;
  const download = options.download ?? browserDownload;
  const dialog =
    options.dialog ?? ((message: string) => doc.defaultView?.alert(message));

  const banner = mustFind<HTMLDivElement>(container, 'error-banner');
  const ontologyInput = mustFind<HTMLInputElement>(container, 'ontology-input');
  const loadButton = mustFind<HTMLButtonElement>(container, 'load-button');
  const sessionStatus = mustFind<HTMLSpanElement>(container, 'session-status');
  const panel = mustFind<HTMLElement>(container, 'annotation-panel');
  const categorySelect = mustFind<HTMLSelectElement>(container, 'category-select');
  const classSelect = mustFind<HTMLSelectElement>(container, 'class-select');
  const classComment = mustFind<HTMLParagraphElement>(container, 'class-comment');
  const snippetText = mustFind<HTMLTextAreaElement>(container, 'snippet-text');
  const annotateButton = mustFind<HTMLButtonElement>(container, 'annotate-button');
  const annotateError = mustFind<HTMLSpanElement>(container, 'annotate-error');
  const snippetRows = mustFind<HTMLTableSectionElement>(container, 'snippet-rows');
  const encodeButton = mustFind<HTMLButtonElement>(container, 'encode-button');
  const encodeSummary = mustFind<HTMLSpanElement>(container, 'encode-summary');
  const orphanWarning = mustFind<HTMLDivElement>(container, 'orphan-warning');
  const warningList = mustFind<HTMLUListElement>(container, 'warning-list');
  const formatSelect = mustFind<HTMLSelectElement>(container, 'format-select');
  const exportButton = mustFind<HTMLButtonElement>(container, 'export-button');

  for (const token of FORMAT_TOKENS) {
    const option = doc.createElement('option');
    option.value = token;
    option.textContent = token;
    formatSelect.appendChild(option);
  }

  const state: UiSessionState = initialState();
  const classGate = new RequestGate();
  const snippetGate = new RequestGate();
  let busy = false;

  function showBanner(message: string): void {
    banner.textContent = message;
    banner.hidden = false;
  }

  function clearBanner(): void {
    banner.textContent = '';
    banner.hidden = true;
  }

  function labelFor(row: AnnotationRow): string {
    return row.label ?? row.iri;
  }

  function syncAnnotateEnabled(): void {
    annotateButton.disabled =
      state.token === null ||
      snippetText.value.trim() === '' ||
      classSelect.value === '';
  }

  function renderComment(): void {
    const row = state.classList.find((c) => c.iri === classSelect.value);
    classComment.textContent = row?.comment ?? '';
  }

  function fillSelect(select: HTMLSelectElement, rows: AnnotationRow[]): void {
    select.innerHTML = '';
    for (const row of rows) {
      const option = doc.createElement('option');
      option.value = row.iri;
      option.textContent = labelFor(row);
      select.appendChild(option);
    }
  }

  function renderSnippets(): void {
    snippetRows.innerHTML = '';
    for (const snippet of state.snippets) {
      const row = doc.createElement('tr');
      row.dataset.id = snippet.id;

      const idCell = doc.createElement('td');
      idCell.className = 'snippet-id';
      idCell.textContent = snippet.id;
      const textCell = doc.createElement('td');
      textCell.className = 'snippet-text';
      textCell.textContent = snippet.text;
      const classCell = doc.createElement('td');
      classCell.className = 'snippet-class';
      classCell.textContent = snippet.classLabel ?? snippet.classIri;
      classCell.title = snippet.classIri;
      const actionCell = doc.createElement('td');
      const removeButton = doc.createElement('button');
      removeButton.type = 'button';
      removeButton.textContent = 'Remove';
      removeButton.addEventListener('click', () => {
        void handle.removeSnippet(snippet.id);
      });
      actionCell.appendChild(removeButton);

      row.append(idCell, textCell, classCell, actionCell);
      snippetRows.appendChild(row);
    }
  }

  function invalidateEncode(): void {
    state.lastEncode = null;
    encodeSummary.textContent = '';
    orphanWarning.hidden = true;
    orphanWarning.textContent = '';
    warningList.innerHTML = '';
  }

  function renderEncode(): void {
    const result = state.lastEncode;
    if (!result) {
      return;
    }
    const n = result.pairs.length;
    encodeSummary.textContent = `${n} link${n === 1 ? '' : 's'}`;
    if (result.orphans.length > 0) {
      orphanWarning.textContent = `Not linked to the report: ${result.orphans.join(', ')}`;
      orphanWarning.hidden = false;
    } else {
      orphanWarning.hidden = true;
      orphanWarning.textContent = '';
    }
    warningList.innerHTML = '';
    for (const warning of result.warnings) {
      const item = doc.createElement('li');
      item.textContent = warning;
      warningList.appendChild(item);
    }
  }

  async function refreshClasses(): Promise<void> {
    if (state.token === null || state.selectedCategory === null) {
      return;
    }
    const ticket = classGate.open();
    const rows = await api.classes(state.token, state.selectedCategory);
    if (!classGate.isCurrent(ticket)) {
      return;
    }
    state.classList = rows;
    fillSelect(classSelect, rows);
    renderComment();
    syncAnnotateEnabled();
  }

  async function refreshSnippets(): Promise<void> {
    if (state.token === null) {
      return;
    }
    const ticket = snippetGate.open();
    const rows = await api.listSnippets(state.token);
    if (!snippetGate.isCurrent(ticket)) {
      return;
    }
    state.snippets = rows;
    renderSnippets();
  }

  const handle: AppHandle = {
    state,

    async loadSession(): Promise<void> {
      if (busy) {
        return;
      }
      busy = true;
      try {
        clearBanner();
        const origin = ontologyInput.value.trim();
        if (origin === '') {
          showBanner('Enter an ontology URL or path first.');
          return;
        }
        const token = await api.createSession(origin);
        state.token = token;
        state.snippets = [];
        invalidateEncode();
        state.categories = await api.categories(token);
        fillSelect(categorySelect, state.categories);
        const first = state.categories[0];
        state.selectedCategory = first ? first.iri : null;
        if (first) {
          categorySelect.value = first.iri;
        }
        await refreshClasses();
        renderSnippets();
        panel.hidden = false;
        sessionStatus.textContent = `Session open (${state.categories.length} categories)`;
      } catch (error) {
        showBanner(error instanceof Error ? error.message : String(error));
      } finally {
        busy = false;
      }
    },

    async selectCategory(iri: string): Promise<void> {
      state.selectedCategory = iri;
      categorySelect.value = iri;
      await refreshClasses();
    },

    selectClass(iri: string): void {
      classSelect.value = iri;
      renderComment();
      syncAnnotateEnabled();
    },

    async annotate(): Promise<void> {
      if (busy || state.token === null) {
        return;
      }
      busy = true;
      try {
        annotateError.hidden = true;
        annotateError.textContent = '';
        await api.addSnippet(state.token, snippetText.value, classSelect.value);
        snippetText.value = '';
        syncAnnotateEnabled();
        invalidateEncode();
        await refreshSnippets();
      } catch (error) {
        if (error instanceof ApiError) {
          annotateError.textContent = error.message;
          annotateError.hidden = false;
        } else {
          showBanner(error instanceof Error ? error.message : String(error));
        }
      } finally {
        busy = false;
      }
    },

    async removeSnippet(id: string): Promise<void> {
      if (busy || state.token === null) {
        return;
      }
      busy = true;
      try {
        await api.removeSnippet(state.token, id);
        invalidateEncode();
        await refreshSnippets();
      } catch (error) {
        showBanner(error instanceof Error ? error.message : String(error));
      } finally {
        busy = false;
      }
    },

    async encode(): Promise<void> {
      if (busy || state.token === null) {
        return;
      }
      busy = true;
      try {
        state.lastEncode = await api.encode(state.token);
        renderEncode();
      } catch (error) {
        if (error instanceof ApiError) {
          dialog(error.message);
        } else {
          showBanner(error instanceof Error ? error.message : String(error));
        }
      } finally {
        busy = false;
      }
    },

    async exportChosen(): Promise<void> {
      if (state.token === null) {
        return;
      }
      if (state.lastEncode === null) {
        await this.encode();
        if (state.lastEncode === null) {
          return;
        }
      }
      if (busy) {
        return;
      }
      busy = true;
      try {
        const format = formatSelect.value as FormatToken;
        const file = await api.exportReport(state.token, format);
        download(file.filename, file.content, file.mediaType);
      } catch (error) {
        if (error instanceof ApiError) {
          dialog(error.message);
        } else {
          showBanner(error instanceof Error ? error.message : String(error));
        }
      } finally {
        busy = false;
      }
    },
  };

  loadButton.addEventListener('click', () => void handle.loadSession());
  categorySelect.addEventListener('change', () => {
    void handle.selectCategory(categorySelect.value);
  });
  classSelect.addEventListener('change', () => handle.selectClass(classSelect.value));
  snippetText.addEventListener('input', syncAnnotateEnabled);
  annotateButton.addEventListener('click', () => void handle.annotate());
  encodeButton.addEventListener('click', () => void handle.encode());
  exportButton.addEventListener('click', () => void handle.exportChosen());

  return handle;
}
