// Typed client for the report service. Every method maps to one endpoint
// and raises ApiError when the server answers with its JSON error shape.

export interface AnnotationRow {
  iri: string;
  label: string | null;
  comment: string | null;
}

export interface SnippetRow {
  id: string;
  text: string;
  classIri: string;
  classLabel: string | null;
}

export interface LinkedPair {
  parent: string;
  child: string;
  property: string;
}

export interface EncodeSummary {
  pairs: LinkedPair[];
  orphans: string[];
  warnings: string[];
}

export interface ExportedFile {
  filename: string;
  mediaType: string;
  content: string;
}

export const FORMAT_TOKENS = ['turtle', 'rdf', 'owl', 'json'] as const;
export type FormatToken = (typeof FORMAT_TOKENS)[number];

export const FILE_EXTENSIONS: Record<FormatToken, string> = {
  turtle: '.ttl',
  rdf: '.nt',
  owl: '.rdf',
  json: '.jsonld',
};

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details?: string[],
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function raiseApiError(response: Response): Promise<never> {
  let code = 'http_error';
  let message = `${response.status} ${response.statusText}`;
  let details: string[] | undefined;
  try {
    const body = await response.json();
    if (body && typeof body.message === 'string') {
      code = typeof body.code === 'string' ? body.code : code;
      message = body.message;
      details = Array.isArray(body.details) ? body.details : undefined;
    }
  } catch {
    // non-JSON error body, keep the status line
  }
  throw new ApiError(response.status, code, message, details);
}

function filenameFrom(disposition: string | null, fallback: string): string {
  const match = disposition?.match(/filename="([^"]+)"/);
  const name = match?.[1];
  return name ? name : fallback;
}

export class ReportApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      await raiseApiError(response);
    }
    return response;
  }

  private async requestJson(path: string, init?: RequestInit): Promise<any> {
    const response = await this.request(path, init);
    return response.json();
  }

  async createSession(ontology: string, baseIri?: string): Promise<string> {
    const body: Record<string, string> = { ontology };
    if (baseIri) {
      body.baseIri = baseIri;
    }
    const data = await this.requestJson('/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    return data.token as string;
  }

  async categories(token: string): Promise<AnnotationRow[]> {
    return this.requestJson(`/sessions/${encodeURIComponent(token)}/categories`);
  }

  async classes(token: string, category: string): Promise<AnnotationRow[]> {
    const query = encodeURIComponent(category);
    return this.requestJson(
      `/sessions/${encodeURIComponent(token)}/classes?category=${query}`,
    );
  }

  async addSnippet(token: string, text: string, classIri: string): Promise<string> {
    const data = await this.requestJson(
      `/sessions/${encodeURIComponent(token)}/snippets`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ text, class: classIri }),
      },
    );
    return data.id as string;
  }

  async listSnippets(token: string): Promise<SnippetRow[]> {
    return this.requestJson(`/sessions/${encodeURIComponent(token)}/snippets`);
  }

  async removeSnippet(token: string, id: string): Promise<void> {
    await this.request(
      `/sessions/${encodeURIComponent(token)}/snippets/${encodeURIComponent(id)}`,
      { method: 'DELETE' },
    );
  }

  async encode(token: string): Promise<EncodeSummary> {
    return this.requestJson(`/sessions/${encodeURIComponent(token)}/encode`, {
      method: 'POST',
    });
  }

  async exportReport(token: string, format: FormatToken): Promise<ExportedFile> {
    const response = await this.request(
      `/sessions/${encodeURIComponent(token)}/export?format=${encodeURIComponent(format)}`,
    );
    return {
      filename: filenameFrom(
        response.headers.get('Content-Disposition'),
        `report${FILE_EXTENSIONS[format]}`,
      ),
      mediaType: response.headers.get('Content-Type') ?? 'application/octet-stream',
      content: await response.text(),
    };
  }
}
