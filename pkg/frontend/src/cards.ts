/**
 * Article card rendering.
 *
 * Layout contract: news angles render above the abstract so they can be
 * scanned first; the outbound article link renders below the abstract as the
 * verification path. Both scores are always shown when available.
 */

import { ApiError } from './api.js'
import type { AngleSetResponse, ArticleItem } from './types.js'

export interface CardHandlers {
  requestAngles: (articleId: string) => Promise<AngleSetResponse>
}

function scoreBlock(label: string, cssClass: string, text: string, barFraction: number): HTMLElement {
  const wrap = document.createElement('div')
  wrap.className = `score ${cssClass}`
  const labelEl = document.createElement('span')
  labelEl.className = 'score-label'
  labelEl.textContent = label
  const valueEl = document.createElement('span')
  valueEl.className = 'score-value'
  valueEl.textContent = text
  const bar = document.createElement('div')
  bar.className = 'score-bar'
  const fill = document.createElement('div')
  fill.className = 'score-bar-fill'
  fill.style.width = `${Math.round(Math.max(0, Math.min(1, barFraction)) * 100)}%`
  bar.appendChild(fill)
  wrap.append(labelEl, valueEl, bar)
  return wrap
}

function renderAngleList(container: HTMLElement, angles: string[], flags: boolean[] | null): void {
  container.textContent = ''
  const heading = document.createElement('h4')
  heading.textContent = 'News angles'
  container.appendChild(heading)
  const list = document.createElement('ul')
  list.className = 'angle-list'
  angles.forEach((angle, i) => {
    const entry = document.createElement('li')
    entry.className = 'angle'
    const text = document.createElement('span')
    text.textContent = angle
    entry.appendChild(text)
    if (flags && flags[i]) {
      const badge = document.createElement('span')
      badge.className = 'badge-redundant'
      badge.title = 'Very similar to the abstract or to another angle'
      badge.textContent = 'redundant'
      entry.appendChild(badge)
    }
    list.appendChild(entry)
  })
  container.appendChild(list)
}

export function createArticleCard(item: ArticleItem, handlers: CardHandlers): HTMLElement {
  const card = document.createElement('article')
  card.className = 'card'
  card.dataset.articleId = item.id

  const title = document.createElement('h3')
  title.className = 'card-title'
  title.textContent = item.title
  card.appendChild(title)

  const published = document.createElement('p')
  published.className = 'card-date'
  published.textContent = `Published ${item.published_date}`
  card.appendChild(published)

  const scores = document.createElement('div')
  scores.className = 'card-scores'
  if (item.newsworthiness !== null) {
    scores.appendChild(
      scoreBlock(
        'Newsworthiness',
        'score-news',
        item.newsworthiness.toFixed(1),
        item.newsworthiness / 100,
      ),
    )
  }
  if (item.outlet_relevance !== null) {
    scores.appendChild(
      scoreBlock(
        'Outlet relevance',
        'score-relevance',
        `${(item.outlet_relevance * 100).toFixed(1)}%`,
        item.outlet_relevance,
      ),
    )
  }
  card.appendChild(scores)

  const anglesBlock = document.createElement('section')
  anglesBlock.className = 'card-angles'
  card.appendChild(anglesBlock)

  if (item.angles) {
    renderAngleList(anglesBlock, item.angles, item.redundant_flags)
  } else {
    const button = document.createElement('button')
    button.type = 'button'
    button.className = 'angles-button'
    button.textContent = 'Generate news angles'
    const error = document.createElement('p')
    error.className = 'angles-error'
    error.hidden = true
    let inFlight = false
    button.addEventListener('click', async () => {
      if (inFlight) return
      inFlight = true
      button.disabled = true
      error.hidden = true
      try {
        const result = await handlers.requestAngles(item.id)
        renderAngleList(anglesBlock, result.angles, result.redundant_flags)
      } catch (exc) {
        const detail = exc instanceof ApiError ? ` (${exc.message})` : ''
        error.textContent = `Angle generation failed${detail} — retry`
        error.hidden = false
        button.disabled = false
        inFlight = false
      }
    })
    anglesBlock.append(button, error)
  }

  const abstract = document.createElement('p')
  abstract.className = 'card-abstract'
  abstract.textContent = item.abstract
  card.appendChild(abstract)

  const link = document.createElement('a')
  link.className = 'card-link'
  link.href = item.url
  link.target = '_blank'
  link.rel = 'noopener'
  link.textContent = 'Open full article'
  card.appendChild(link)

  return card
}
