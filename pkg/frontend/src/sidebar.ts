/**
 * Sidebar controls driving the article query.
 *
 * Every control carries a hover/focus explainer, posts its change through a
 * single callback (the app debounces), and can display the server's
 * field-level validation errors inline.
 */

import type { OutletSummary } from './types.js'
import type { SidebarState } from './urlstate.js'

export interface SidebarCallbacks {
  onChange: (update: Partial<SidebarState>) => void
  onPageStep: (delta: 1 | -1) => void
  onShowAbout: () => void
}

const EXPLAINERS: Record<string, string> = {
  date_from: 'Only show preprints published on or after this date.',
  date_to: 'Only show preprints published on or before this date.',
  min_news: 'Hide articles whose predicted newsworthiness (0-100) falls below this value. 0 disables the filter.',
  max_news: 'Hide articles whose predicted newsworthiness exceeds this value. 100 disables the filter.',
  outlets: 'Pick outlets to compute relevance against. With several selected, their relevance scores are averaged.',
  rank_by: 'Order results by the newsworthiness score or by relevance to the selected outlets. Ranking by relevance needs at least one outlet.',
  page_size: 'Articles per page.',
}

function explainer(field: string): HTMLElement {
  const tip = document.createElement('span')
  tip.className = 'explainer'
  tip.tabIndex = 0
  tip.dataset.tip = EXPLAINERS[field] ?? ''
  tip.setAttribute('role', 'tooltip')
  tip.textContent = '?'
  return tip
}

function group(field: string, labelText: string, control: HTMLElement): HTMLElement {
  const wrap = document.createElement('div')
  wrap.className = 'control-group'
  wrap.dataset.field = field
  const label = document.createElement('label')
  label.className = 'control-label'
  label.textContent = labelText
  label.appendChild(explainer(field))
  const error = document.createElement('p')
  error.className = 'field-error'
  error.dataset.fieldError = field
  error.hidden = true
  wrap.append(label, control, error)
  return wrap
}

export class Sidebar {
  readonly element: HTMLElement
  private minSlider!: HTMLInputElement
  private maxSlider!: HTMLInputElement
  private minValue!: HTMLElement
  private maxValue!: HTMLElement
  private pageIndicator!: HTMLElement
  private prevButton!: HTMLButtonElement
  private nextButton!: HTMLButtonElement

  constructor(
    state: SidebarState,
    outlets: OutletSummary[],
    private callbacks: SidebarCallbacks,
  ) {
    this.element = document.createElement('aside')
    this.element.className = 'sidebar'
    this.build(state, outlets)
  }

  private build(state: SidebarState, outlets: OutletSummary[]): void {
    const heading = document.createElement('h2')
    heading.textContent = 'Filters'
    this.element.appendChild(heading)

    const dateFrom = document.createElement('input')
    dateFrom.type = 'date'
    dateFrom.name = 'date_from'
    dateFrom.value = state.dateFrom
    dateFrom.addEventListener('change', () =>
      this.callbacks.onChange({ dateFrom: dateFrom.value, page: 1 }),
    )
    this.element.appendChild(group('date_from', 'Published from', dateFrom))

    const dateTo = document.createElement('input')
    dateTo.type = 'date'
    dateTo.name = 'date_to'
    dateTo.value = state.dateTo
    dateTo.addEventListener('change', () =>
      this.callbacks.onChange({ dateTo: dateTo.value, page: 1 }),
    )
    this.element.appendChild(group('date_to', 'Published to', dateTo))

    const minWrap = document.createElement('div')
    this.minSlider = document.createElement('input')
    this.minSlider.type = 'range'
    this.minSlider.min = '0'
    this.minSlider.max = '100'
    this.minSlider.step = '1'
    this.minSlider.name = 'min_news'
    this.minSlider.value = String(state.minNews ?? 0)
    this.minValue = document.createElement('output')
    this.updateSliderOutput(this.minValue, state.minNews, 'no minimum')
    this.minSlider.addEventListener('input', () => {
      const value = Number(this.minSlider.value)
      const minNews = value <= 0 ? null : value
      this.updateSliderOutput(this.minValue, minNews, 'no minimum')
      this.callbacks.onChange({ minNews, page: 1 })
    })
    minWrap.append(this.minSlider, this.minValue)
    this.element.appendChild(group('min_news', 'Newsworthiness minimum', minWrap))

    const maxWrap = document.createElement('div')
    this.maxSlider = document.createElement('input')
    this.maxSlider.type = 'range'
    this.maxSlider.min = '0'
    this.maxSlider.max = '100'
    this.maxSlider.step = '1'
    this.maxSlider.name = 'max_news'
    this.maxSlider.value = String(state.maxNews ?? 100)
    this.maxValue = document.createElement('output')
    this.updateSliderOutput(this.maxValue, state.maxNews, 'no maximum')
    this.maxSlider.addEventListener('input', () => {
      const value = Number(this.maxSlider.value)
      const maxNews = value >= 100 ? null : value
      this.updateSliderOutput(this.maxValue, maxNews, 'no maximum')
      this.callbacks.onChange({ maxNews, page: 1 })
    })
    maxWrap.append(this.maxSlider, this.maxValue)
    this.element.appendChild(group('max_news', 'Newsworthiness maximum', maxWrap))

    const outletBox = document.createElement('div')
    outletBox.className = 'outlet-select'
    const selected = new Set(state.outlets)
    for (const outlet of outlets) {
      const row = document.createElement('label')
      row.className = 'outlet-row'
      const checkbox = document.createElement('input')
      checkbox.type = 'checkbox'
      checkbox.value = outlet.outlet_id
      checkbox.checked = selected.has(outlet.outlet_id)
      checkbox.addEventListener('change', () => {
        if (checkbox.checked) selected.add(outlet.outlet_id)
        else selected.delete(outlet.outlet_id)
        this.callbacks.onChange({ outlets: [...selected], page: 1 })
      })
      const text = document.createElement('span')
      text.textContent = `${outlet.name}`
      const kind = document.createElement('small')
      kind.textContent = outlet.outlet_type.replace(/_/g, ' ')
      row.append(checkbox, text, kind)
      outletBox.appendChild(row)
    }
    this.element.appendChild(group('outlets', 'Outlets', outletBox))

    const rankWrap = document.createElement('div')
    rankWrap.className = 'rank-toggle'
    for (const [value, label] of [
      ['newsworthiness', 'Newsworthiness'],
      ['outlet_relevance', 'Outlet relevance'],
    ] as const) {
      const row = document.createElement('label')
      const radio = document.createElement('input')
      radio.type = 'radio'
      radio.name = 'rank_by'
      radio.value = value
      radio.checked = state.rankBy === value
      radio.addEventListener('change', () => {
        if (radio.checked) this.callbacks.onChange({ rankBy: value, page: 1 })
      })
      const text = document.createElement('span')
      text.textContent = label
      row.append(radio, text)
      rankWrap.appendChild(row)
    }
    this.element.appendChild(group('rank_by', 'Rank by', rankWrap))

    const pager = document.createElement('div')
    pager.className = 'pager'
    this.prevButton = document.createElement('button')
    this.prevButton.type = 'button'
    this.prevButton.textContent = 'Previous'
    this.prevButton.dataset.action = 'prev-page'
    this.nextButton = document.createElement('button')
    this.nextButton.type = 'button'
    this.nextButton.textContent = 'Next'
    this.nextButton.dataset.action = 'next-page'
    this.pageIndicator = document.createElement('span')
    this.pageIndicator.className = 'page-indicator'
    this.prevButton.addEventListener('click', () => this.callbacks.onPageStep(-1))
    this.nextButton.addEventListener('click', () => this.callbacks.onPageStep(1))
    pager.append(this.prevButton, this.pageIndicator, this.nextButton)

    const sizeSelect = document.createElement('select')
    sizeSelect.name = 'page_size'
    for (const size of [10, 20, 50]) {
      const option = document.createElement('option')
      option.value = String(size)
      option.textContent = `${size} per page`
      option.selected = state.pageSize === size
      sizeSelect.appendChild(option)
    }
    sizeSelect.addEventListener('change', () =>
      this.callbacks.onChange({ pageSize: Number(sizeSelect.value), page: 1 }),
    )
    pager.appendChild(sizeSelect)
    this.element.appendChild(group('page_size', 'Pages', pager))

    const aboutLink = document.createElement('a')
    aboutLink.href = '#about'
    aboutLink.className = 'about-link'
    aboutLink.textContent = 'How these scores and angles are computed'
    aboutLink.addEventListener('click', (event) => {
      event.preventDefault()
      this.callbacks.onShowAbout()
    })
    this.element.appendChild(aboutLink)
  }

  private updateSliderOutput(output: HTMLElement, value: number | null, offText: string): void {
    output.textContent = value === null ? offText : String(value)
  }

  setFieldErrors(errors: Array<{ field: string; message: string }>): void {
    this.clearFieldErrors()
    for (const { field, message } of errors) {
      const slot = this.element.querySelector<HTMLElement>(`[data-field-error="${field}"]`)
      if (slot) {
        slot.textContent = message
        slot.hidden = false
      }
    }
  }

  clearFieldErrors(): void {
    for (const slot of this.element.querySelectorAll<HTMLElement>('[data-field-error]')) {
      slot.hidden = true
      slot.textContent = ''
    }
  }

  updatePager(page: number, totalPages: number): void {
    this.pageIndicator.textContent = totalPages > 0 ? `page ${page} of ${totalPages}` : 'page 1'
    this.prevButton.disabled = page <= 1
    this.nextButton.disabled = totalPages === 0 || page >= totalPages
  }
}
