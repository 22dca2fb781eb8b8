/**
 * UI contract against the real API server running in stub mode
 * (started by tests/global-setup.ts).
 */

import { beforeEach, describe, expect, inject, it, vi } from 'vitest'

import { App } from '../src/app.js'
import { parseState, serializeState } from '../src/urlstate.js'

const apiBase = inject('apiBase')

// The console is served from the same origin as the API (cnd serve mounts it
// under /ui), so tests point the document at the live server and use
// relative requests, exactly like production.
function freshRoot(search = ''): HTMLElement {
  const happyDOM = (window as unknown as { happyDOM: { setURL(url: string): void } }).happyDOM
  happyDOM.setURL(`${apiBase}/${search}`)
  document.body.innerHTML = '<div id="app"></div>'
  return document.getElementById('app')!
}

async function mounted(search = ''): Promise<App> {
  const app = new App(freshRoot(search), { debounceMs: 0 })
  await app.init()
  return app
}

function setSlider(root: Document, name: string, value: string): void {
  const slider = root.querySelector<HTMLInputElement>(`input[name="${name}"]`)!
  slider.value = value
  slider.dispatchEvent(new Event('input', { bubbles: true }))
}

beforeEach(() => {
  document.body.innerHTML = ''
})

describe('deep links', () => {
  it('query string -> sidebar state -> identical request', async () => {
    const search = '?min_news=70&rank_by=outlet_relevance&outlets=wired'
    const app = await mounted(search)
    expect(app.state.minNews).toBe(70)
    expect(app.state.rankBy).toBe('outlet_relevance')
    expect(app.state.outlets).toEqual(['wired'])

    // state -> query string -> state is lossless and the issued request
    // carries exactly the serialized state
    expect(parseState(serializeState(app.state))).toEqual(app.state)
    expect(app.lastRequestQuery).toBe(serializeState(app.state))
    const params = new URLSearchParams(app.lastRequestQuery!)
    expect(params.get('min_news')).toBe('70')
    expect(params.get('outlets')).toBe('wired')
  })

  it('a deep link runs the query immediately and hides onboarding', async () => {
    await mounted('?min_news=10')
    const onboarding = document.querySelector<HTMLElement>('.onboarding')!
    expect(onboarding.hidden).toBe(true)
    expect(document.querySelectorAll('.card').length).toBeGreaterThan(0)
  })
})

describe('sidebar-driven queries', () => {
  it('slider at 70 requests min_news=70 and every rendered score is >= 70', async () => {
    const app = await mounted()
    setSlider(document, 'min_news', '70')
    await app.flush()

    expect(app.lastRequestQuery).toContain('min_news=70')
    const cards = document.querySelectorAll('.card')
    expect(cards.length).toBeGreaterThan(0)
    for (const card of cards) {
      const value = card.querySelector('.score-news .score-value')!.textContent!
      expect(Number.parseFloat(value)).toBeGreaterThanOrEqual(70)
    }
    for (const item of app.currentPage()!.items) {
      expect(item.newsworthiness).toBeGreaterThanOrEqual(70)
    }
  })

  it('onboarding shows before the first query and hides after it', async () => {
    const app = await mounted()
    const onboarding = document.querySelector<HTMLElement>('.onboarding')!
    expect(onboarding.hidden).toBe(false)
    setSlider(document, 'min_news', '30')
    await app.flush()
    expect(onboarding.hidden).toBe(true)
  })

  it('card order equals API response order with no client-side re-ranking', async () => {
    const app = await mounted('?page_size=10')
    const rendered = [...document.querySelectorAll<HTMLElement>('.card')].map(
      (card) => card.dataset.articleId,
    )
    expect(rendered).toEqual(app.currentPage()!.items.map((item) => item.id))
    const scores = app.currentPage()!.items.map((item) => item.newsworthiness!)
    expect([...scores].sort((a, b) => b - a)).toEqual(scores)
  })

  it('rank by relevance without outlets is blocked with an inline error', async () => {
    const app = await mounted()
    const before = app.lastRequestQuery
    const radio = document.querySelector<HTMLInputElement>(
      'input[name="rank_by"][value="outlet_relevance"]',
    )!
    radio.checked = true
    radio.dispatchEvent(new Event('change', { bubbles: true }))
    await app.flush()
    expect(app.lastRequestQuery).toBe(before) // no request was issued
    const error = document.querySelector<HTMLElement>('[data-field-error="outlets"]')!
    expect(error.hidden).toBe(false)
    expect(error.textContent).toContain('outlet')
  })

  it('rank by relevance with outlets selected issues the request and shows scores', async () => {
    const app = await mounted()
    const checkbox = document.querySelector<HTMLInputElement>(
      '.outlet-select input[value="wired"]',
    )!
    checkbox.checked = true
    checkbox.dispatchEvent(new Event('change', { bubbles: true }))
    const radio = document.querySelector<HTMLInputElement>(
      'input[name="rank_by"][value="outlet_relevance"]',
    )!
    radio.checked = true
    radio.dispatchEvent(new Event('change', { bubbles: true }))
    await app.flush()

    const params = new URLSearchParams(app.lastRequestQuery!)
    expect(params.get('rank_by')).toBe('outlet_relevance')
    expect(params.get('outlets')).toBe('wired')
    const relevance = document.querySelectorAll('.score-relevance')
    expect(relevance.length).toBeGreaterThan(0)
  })

  it('an empty result set renders an explicit empty state', async () => {
    const app = await mounted('?date_from=1999-01-01&date_to=1999-12-31')
    await app.flush()
    expect(document.querySelector('.empty-state')).not.toBeNull()
    expect(document.querySelectorAll('.card').length).toBe(0)
  })
})

describe('article cards against live data', () => {
  it('angles render above the abstract on every card', async () => {
    await mounted('?page_size=50')
    const cards = document.querySelectorAll('.card')
    expect(cards.length).toBeGreaterThan(0)
    for (const card of cards) {
      const children = Array.from(card.children)
      const anglesIdx = children.findIndex((el) => el.classList.contains('card-angles'))
      const abstractIdx = children.findIndex((el) => el.classList.contains('card-abstract'))
      const linkIdx = children.findIndex((el) => el.classList.contains('card-link'))
      expect(anglesIdx).toBeGreaterThanOrEqual(0)
      expect(anglesIdx).toBeLessThan(abstractIdx)
      expect(linkIdx).toBeGreaterThan(abstractIdx)
    }
  })

  it('stub-backed generation fills a card with three angles', async () => {
    await mounted('?page_size=50')
    const button = document.querySelector<HTMLButtonElement>('.angles-button')
    expect(button).not.toBeNull()
    const card = button!.closest('.card')!
    button!.click()
    await vi.waitFor(() => {
      expect(card.querySelectorAll('.angle').length).toBe(3)
    })
    const children = Array.from(card.children)
    expect(children.findIndex((el) => el.classList.contains('card-angles'))).toBeLessThan(
      children.findIndex((el) => el.classList.contains('card-abstract')),
    )
  })
})

describe('explainers and the transparency page', () => {
  it('every control group exposes a hover/focus explainer', async () => {
    await mounted()
    const groups = document.querySelectorAll('.control-group')
    expect(groups.length).toBeGreaterThanOrEqual(6)
    for (const group of groups) {
      const tip = group.querySelector<HTMLElement>('.explainer')!
      expect(tip).not.toBeNull()
      expect(tip.dataset.tip!.length).toBeGreaterThan(0)
      expect(tip.tabIndex).toBe(0)
    }
  })

  it('the about panel renders all disclosure sections from the API', async () => {
    const app = await mounted()
    await app.showAbout()
    const topics = [...document.querySelectorAll<HTMLElement>('.about-panel [data-topic]')].map(
      (el) => el.dataset.topic,
    )
    expect(new Set(topics)).toEqual(
      new Set(['newsworthiness', 'outlet_relevance', 'news_angles', 'data_provenance']),
    )
  })
})

describe('request discipline', () => {
  it('rapid control changes collapse into one request (debounce + latest wins)', async () => {
    const app = await mounted()
    const spy = vi.spyOn(globalThis, 'fetch')
    try {
      setSlider(document, 'min_news', '10')
      setSlider(document, 'min_news', '40')
      setSlider(document, 'min_news', '70')
      await app.flush()
      const articleCalls = spy.mock.calls.filter((args) =>
        String(args[0]).includes('/articles?'),
      )
      expect(articleCalls.length).toBe(1)
      expect(String(articleCalls[0][0])).toContain('min_news=70')
    } finally {
      spy.mockRestore()
    }
  })
})
