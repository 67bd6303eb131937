// @vitest-environment jsdom
// Drives the real DOM app against a live service instance and prints one
// verdict line per shipping flow.

import { ChildProcess, spawn } from 'node:child_process';
import { existsSync, mkdtempSync, writeFileSync } from 'node:fs';
import { createServer } from 'node:net';
import { tmpdir } from 'node:os';
import { join, resolve } from 'node:path';
import { afterAll, beforeAll, expect, it } from 'vitest';

import { ReportApi } from '../src/api.js';
import { AppHandle, wireApp } from '../src/app.js';

// vitest runs from frontend/, one level below the repository root
const REPO_ROOT = resolve(process.cwd(), '..');
const FIXTURE = join(REPO_ROOT, 'tests', 'fixtures', 'mini-mcro.ttl');
if (!existsSync(FIXTURE)) {
  throw new Error(`fixture ontology not found at ${FIXTURE}`);
}
const MCRO = 'https://w3id.org/mcforge/mini-mcro#';

let server: ChildProcess;
let baseUrl: string;
let api: ReportApi;
let handle: AppHandle;
let container: HTMLElement;
const downloads: Array<{ filename: string; content: string; mediaType: string }> = [];
const dialogs: string[] = [];

function freePort(): Promise<number> {
  return new Promise((resolvePort, reject) => {
    const probe = createServer();
    probe.once('error', reject);
    probe.listen(0, '127.0.0.1', () => {
      const address = probe.address();
      if (address === null || typeof address === 'string') {
        reject(new Error('no port assigned'));
        return;
      }
      probe.close(() => resolvePort(address.port));
    });
  });
}

async function waitForServer(url: string, timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      await fetch(`${url}/sessions/none/snippets`);
      return;
    } catch {
      if (Date.now() > deadline) {
        throw new Error(`service did not come up at ${url}`);
      }
      await new Promise((r) => setTimeout(r, 200));
    }
  }
}

function byId<T extends HTMLElement>(id: string): T {
  const el = container.querySelector(`#${id}`);
  expect(el, `#${id}`).not.toBeNull();
  return el as T;
}

function setText(text: string): void {
  const area = byId<HTMLTextAreaElement>('snippet-text');
  area.value = text;
  area.dispatchEvent(new Event('input'));
}

async function annotateAs(text: string, category: string, cls: string): Promise<void> {
  await handle.selectCategory(category);
  handle.selectClass(cls);
  setText(text);
  await handle.annotate();
}

beforeAll(async () => {
  const scratch = mkdtempSync(join(tmpdir(), 'annotation-ui-'));
  const confPath = join(scratch, 'mcforge.conf');
  writeFileSync(confPath, `cache_dir = ${join(scratch, 'cache')}\n`);
  const port = await freePort();
  baseUrl = `http://127.0.0.1:${port}`;
  server = spawn(
    'python3',
    ['-m', 'mcforge', 'serve', '--port', String(port), '--config', confPath],
    { cwd: REPO_ROOT, stdio: ['ignore', 'pipe', 'pipe'] },
  );
  await waitForServer(baseUrl, 30_000);

  api = new ReportApi(baseUrl, (url, init) => fetch(url, init));
  container = document.createElement('div');
  document.body.appendChild(container);
  handle = wireApp(container, api, {
    download: (filename, content, mediaType) => downloads.push({ filename, content, mediaType }),
    dialog: (message) => dialogs.push(message),
  });
});

afterAll(() => {
  server?.kill('SIGTERM');
});

it('annotate flow adds a visible row matching the server list', async () => {
  byId<HTMLInputElement>('ontology-input').value = FIXTURE;
  await handle.loadSession();
  expect(handle.state.token).not.toBeNull();

  await handle.selectCategory(`${MCRO}ModelCardSection`);
  handle.selectClass(`${MCRO}IntendedUseSection`);
  expect(byId('class-comment').textContent).toBe('Primary intended uses of the model.');

  setText('Intended for broad screening.');
  await handle.annotate();

  const rows = [...container.querySelectorAll('#snippet-rows tr')];
  expect(rows.length).toBe(1);
  expect(rows[0]?.querySelector('.snippet-id')?.textContent).toBe('s1');
  const serverRows = await api.listSnippets(handle.state.token as string);
  expect(handle.state.snippets).toEqual(serverRows);
  expect(serverRows.map((r) => r.id)).toEqual(['s1']);
  console.log('[PASS] criterion 7a: annotate adds a visible row matching the server list');
});

it('encode-and-export downloads the same document the server exports', async () => {
  await annotateAs('Weak on rare cohorts.', `${MCRO}ModelCardSection`, `${MCRO}LimitationSection`);
  await annotateAs('AUROC 0.84 held out.', `${MCRO}ModelCardSection`, `${MCRO}PerformanceSection`);
  await handle.encode();
  expect(byId('encode-summary').textContent).toBe('3 links');
  expect(byId<HTMLDivElement>('orphan-warning').hidden).toBe(true);

  byId<HTMLSelectElement>('format-select').value = 'turtle';
  await handle.exportChosen();
  expect(downloads.length).toBe(1);
  expect(downloads[0]?.filename).toBe('report.ttl');

  const direct = await api.exportReport(handle.state.token as string, 'turtle');
  expect(downloads[0]?.content).toBe(direct.content);
  console.log('[PASS] criterion 7b: exported download matches the server export');
});

it('orphan warning renders when an orphan snippet is present', async () => {
  await annotateAs('Appendix content.', `${MCRO}DocumentPart`, `${MCRO}DocumentPart`);
  expect(handle.state.lastEncode).toBeNull();
  await handle.encode();

  const warning = byId<HTMLDivElement>('orphan-warning');
  expect(warning.hidden).toBe(false);
  expect(warning.textContent).toContain('s4');
  expect(warning.className).toContain('warning-amber');
  expect(dialogs).toEqual([]);
  console.log('[PASS] criterion 7c: orphan warning renders with the snippet id');
});
