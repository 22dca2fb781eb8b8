/**
 * Journalist console controller.
 *
 * The UI is a pure view over the API: the sidebar serializes to the
 * GET /articles query string (also the deep-link format), responses render in
 * order with no client-side re-ranking, and at most one articles request is
 * in flight (latest wins). Control changes are debounced so slider drags
 * issue a single request.
 */

import { ApiClient, ApiError } from './api.js'
import { createArticleCard } from './cards.js'
import { Sidebar } from './sidebar.js'
import type { ArticlesPage, OutletSummary } from './types.js'
import {
  SidebarState,
  defaultState,
  parseState,
  serializeState,
  stateViolations,
} from './urlstate.js'

export interface AppOptions {
  apiBase?: string
  debounceMs?: number
}

const ONBOARDING_STEPS = [
  'Pick a publication window and a newsworthiness range in the sidebar.',
  'Select outlets you write or pitch for to see outlet relevance, and switch ranking between the two scores.',
  'Scan the generated news angles above each abstract, then open the full article to verify.',
]

export class App {
  readonly state: SidebarState
  readonly client: ApiClient
  lastRequestQuery: string | null = null

  private root: HTMLElement
  private debounceMs: number
  private sidebar!: Sidebar
  private results!: HTMLElement
  private statusBar!: HTMLElement
  private onboarding!: HTMLElement
  private aboutPanel!: HTMLElement
  private retryBanner!: HTMLElement
  private timer: ReturnType<typeof setTimeout> | null = null
  private sequence = 0
  private controller: AbortController | null = null
  private hadFirstQuery = false
  private lastPage: ArticlesPage | null = null

  constructor(root: HTMLElement, options: AppOptions = {}) {
    this.root = root
    this.client = new ApiClient(options.apiBase ?? '')
    this.debounceMs = options.debounceMs ?? 300
    this.state = parseState(window.location.search)
  }

  async init(): Promise<void> {
    const outlets = await this.client.getOutlets()
    this.buildLayout(outlets)
    if (window.location.search.length > 1) {
      await this.runQueryNow()
    }
  }

  private buildLayout(outlets: OutletSummary[]): void {
    this.root.textContent = ''
    this.root.className = 'app'

    this.sidebar = new Sidebar(this.state, outlets, {
      onChange: (update) => this.applyUpdate(update),
      onPageStep: (delta) => this.stepPage(delta),
      onShowAbout: () => void this.showAbout(),
    })
    this.root.appendChild(this.sidebar.element)

    const main = document.createElement('main')
    main.className = 'main'

    this.retryBanner = document.createElement('div')
    this.retryBanner.className = 'retry-banner'
    this.retryBanner.hidden = true
    main.appendChild(this.retryBanner)

    this.onboarding = document.createElement('section')
    this.onboarding.className = 'onboarding'
    const onboardingTitle = document.createElement('h2')
    onboardingTitle.textContent = 'Find newsworthy preprints'
    const flow = document.createElement('p')
    flow.className = 'onboarding-flow'
    flow.textContent = 'preprints → newsworthiness score → outlet relevance → news angles'
    const steps = document.createElement('ol')
    for (const step of ONBOARDING_STEPS) {
      const li = document.createElement('li')
      li.textContent = step
      steps.appendChild(li)
    }
    this.onboarding.append(onboardingTitle, flow, steps)
    main.appendChild(this.onboarding)

    this.statusBar = document.createElement('p')
    this.statusBar.className = 'status-bar'
    main.appendChild(this.statusBar)

    this.results = document.createElement('div')
    this.results.className = 'results'
    main.appendChild(this.results)

    this.aboutPanel = document.createElement('section')
    this.aboutPanel.className = 'about-panel'
    this.aboutPanel.hidden = true
    main.appendChild(this.aboutPanel)

    this.root.appendChild(main)
  }

  applyUpdate(update: Partial<SidebarState>): void {
    Object.assign(this.state, update)
    this.scheduleQuery()
  }

  private stepPage(delta: 1 | -1): void {
    const next = this.state.page + delta
    if (next < 1) return
    this.state.page = next
    this.scheduleQuery()
  }

  scheduleQuery(): void {
    if (this.timer !== null) clearTimeout(this.timer)
    this.timer = setTimeout(() => {
      this.timer = null
      void this.runQueryNow()
    }, this.debounceMs)
  }

  /** Run any pending debounced query immediately (used by tests). */
  async flush(): Promise<void> {
    if (this.timer !== null) {
      clearTimeout(this.timer)
      this.timer = null
      await this.runQueryNow()
    }
  }

  async runQueryNow(): Promise<void> {
    this.sidebar.clearFieldErrors()
    const violations = stateViolations(this.state)
    if (violations.length) {
      this.sidebar.setFieldErrors(violations)
      return
    }

    const query = serializeState(this.state)
    this.lastRequestQuery = query
    const seq = ++this.sequence
    this.controller?.abort()
    this.controller = new AbortController()
    this.retryBanner.hidden = true

    let page: ArticlesPage
    try {
      page = await this.client.getArticles(query, this.controller.signal)
    } catch (exc) {
      if (seq !== this.sequence) return // a newer request superseded this one
      if (exc instanceof ApiError) {
        if (exc.fieldErrors.length) this.sidebar.setFieldErrors(exc.fieldErrors)
        else this.showRetry(`Request failed: ${exc.message}`)
      } else if ((exc as Error).name !== 'AbortError') {
        this.showRetry('Network problem while loading articles.')
      }
      return
    }
    if (seq !== this.sequence) return

    this.hadFirstQuery = true
    this.onboarding.hidden = true
    this.lastPage = page
    this.syncUrl(query)
    this.renderResults(page)
  }

  private showRetry(message: string): void {
    this.retryBanner.textContent = ''
    const text = document.createElement('span')
    text.textContent = message
    const retry = document.createElement('button')
    retry.type = 'button'
    retry.textContent = 'Retry'
    retry.addEventListener('click', () => void this.runQueryNow())
    this.retryBanner.append(text, retry)
    this.retryBanner.hidden = false
  }

  private syncUrl(query: string): void {
    const target = query ? `${window.location.pathname}?${query}` : window.location.pathname
    window.history.replaceState(null, '', target)
  }

  private renderResults(page: ArticlesPage): void {
    this.aboutPanel.hidden = true
    this.results.hidden = false
    const totalPages = Math.ceil(page.total_matches / page.page_size)
    this.sidebar.updatePager(page.page, totalPages)

    const unscored = page.skipped_unscored
      ? ` (${page.skipped_unscored} unscored articles hidden)`
      : ''
    this.statusBar.textContent = `${page.total_matches} matching articles${unscored}`

    this.results.textContent = ''
    if (page.items.length === 0) {
      const empty = document.createElement('p')
      empty.className = 'empty-state'
      empty.textContent =
        page.total_matches === 0
          ? 'No articles match these filters. Widen the date range or lower the newsworthiness minimum.'
          : 'This page is past the end of the results.'
      this.results.appendChild(empty)
      return
    }
    for (const item of page.items) {
      this.results.appendChild(
        createArticleCard(item, {
          requestAngles: (articleId) => this.client.postAngles(articleId),
        }),
      )
    }
  }

  async showAbout(): Promise<void> {
    const disclosure = await this.client.getAbout()
    this.aboutPanel.textContent = ''
    const heading = document.createElement('h2')
    heading.textContent = 'About these signals'
    this.aboutPanel.appendChild(heading)
    for (const section of disclosure.sections) {
      const block = document.createElement('section')
      block.dataset.topic = section.topic
      const title = document.createElement('h3')
      title.textContent = section.title
      const body = document.createElement('p')
      body.textContent = section.body
      block.append(title, body)
      if (section.references.length) {
        const refs = document.createElement('ul')
        for (const url of section.references) {
          const li = document.createElement('li')
          const a = document.createElement('a')
          a.href = url
          a.textContent = url
          a.rel = 'noopener'
          li.appendChild(a)
          refs.appendChild(li)
        }
        block.appendChild(refs)
      }
      this.aboutPanel.appendChild(block)
    }
    const close = document.createElement('button')
    close.type = 'button'
    close.textContent = 'Back to results'
    close.addEventListener('click', () => {
      this.aboutPanel.hidden = true
      this.results.hidden = false
    })
    this.aboutPanel.appendChild(close)
    this.results.hidden = true
    this.aboutPanel.hidden = false
  }

  /** Snapshot used by tests; the UI never re-sorts or filters it. */
  currentPage(): ArticlesPage | null {
    return this.lastPage
  }
}

export function mountApp(root: HTMLElement, options: AppOptions = {}): App {
  return new App(root, options)
}

export { defaultState, parseState, serializeState, stateViolations }
export type { SidebarState }
