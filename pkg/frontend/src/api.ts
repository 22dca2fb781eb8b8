/** Thin typed client over the cnd REST API. */

import type {
  AngleSetResponse,
  ArticlesPage,
  Disclosure,
  FieldError,
  OutletSummary,
} from './types.js'

export class ApiError extends Error {
  status: number
  fieldErrors: FieldError[]

  constructor(status: number, message: string, fieldErrors: FieldError[] = []) {
    super(message)
    this.status = status
    this.fieldErrors = fieldErrors
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return
  let message = `HTTP ${response.status}`
  let fieldErrors: FieldError[] = []
  try {
    const body = await response.json()
    if (Array.isArray(body.errors)) {
      fieldErrors = body.errors
      message = fieldErrors.map((e) => `${e.field}: ${e.message}`).join('; ')
    } else if (typeof body.error === 'string') {
      message = body.error
    }
  } catch {
    // non-JSON error body; keep the status message
  }
  throw new ApiError(response.status, message, fieldErrors)
}

export class ApiClient {
  constructor(private baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`
  }

  async getArticles(query: string, signal?: AbortSignal): Promise<ArticlesPage> {
    const suffix = query ? `?${query}` : ''
    const response = await fetch(this.url(`/articles${suffix}`), { signal })
    await raiseForStatus(response)
    return response.json()
  }

  async postAngles(
    articleId: string,
    options: { fresh?: boolean; threshold?: number } = {},
  ): Promise<AngleSetResponse> {
    const response = await fetch(this.url(`/articles/${articleId}/angles`), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(options),
    })
    await raiseForStatus(response)
    return response.json()
  }

  async getOutlets(): Promise<OutletSummary[]> {
    const response = await fetch(this.url('/outlets'))
    await raiseForStatus(response)
    return response.json()
  }

  async getAbout(): Promise<Disclosure> {
    const response = await fetch(this.url('/about'))
    await raiseForStatus(response)
    return response.json()
  }
}
